#pragma once

#include <vector>

#include "dlat/symbols.hpp"

namespace dlat {

struct SweepRecord {
  double h = 0.0;
  double value = 0.0;
  Momentum xi_argmax;
  /// Samples per axis actually used.
  int grid_n = 0;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  /// Number of points in the final fit.
  int points = 0;
  /// True when the largest h was discarded after a poor first fit.
  bool dropped_largest_h = false;
};

struct WitnessReport {
  ModelId a;
  ModelId b;
  double h = 0.0;
  /// Grid maximum of the resolvent difference at z = i.
  double measured = 0.0;
  /// The difference evaluated exactly at xi_witness.
  double at_witness = 0.0;
  double closed_form = 0.0;
  Momentum xi_witness;
  int grid_n = 0;
};

/// 129 for d <= 2, 33 for d = 3.
int default_grid_n(int d);

/// Samples per axis after alignment: the smallest 2^k + 1 >= grid_n. Grids of
/// this form nest under doubling and contain 0, +-pi/2h and +-pi/h.
int aligned_grid_n(int grid_n);

/// Sample points of one axis: the aligned uniform grid on [-a, a] (endpoints
/// included) together with 0, +-pi/2h, +-pi/h when they lie in [-a, a]. A
/// positive core_width c < a adds a second aligned grid on [-c, c], so that
/// features at fixed physical momentum stay resolved as h shrinks.
std::vector<double> axis_samples(double h, double half_width, int grid_n, double core_width = 0.0);

/// max over the grid on T_h^d of ||(G_a - z)^{-1} - (G_b - z)^{-1}||. When one
/// side is the continuous symbol the grid carries a core of half-width
/// 4 max(1, m, |z|).
SweepRecord sup_resolvent_difference(const ModelId& a, const ModelId& b, cplx z, int grid_n);

/// One record per h comparing the discrete model at that h with the
/// continuous symbol of the same d and m.
std::vector<SweepRecord> convergence_sweep(ModelKind kind, int d, double m, cplx z,
                                           const std::vector<double>& h_list, int grid_n);

/// Least squares on (log h, log value). With r^2 < 0.99 and more than three
/// points the largest h is dropped and the fit repeated once.
RateFit fit_rate(const std::vector<SweepRecord>& records);
RateFit fit_rate(const std::vector<double>& h, const std::vector<double>& value);

/// Closed-form floor of ||R_a - R_b|| at z = i for the supported pairs
/// 1D (fb, s), 2D (s, s_mod), 2D (fb, fb_mod), 3D (fb, fb_mod) (either order).
double witness_closed_form(const ModelId& a, const ModelId& b);
Momentum witness_point(const ModelId& a, const ModelId& b);
WitnessReport nonconvergence_witness(const ModelId& a, const ModelId& b, double h, int grid_n = 0);

/// max over h xi in [-3pi/2, 3pi/2]^d of ||(R_h(xi) - R(xi)) R(xi)||, where R
/// is the continuous resolvent at z and R_h the model's.
SweepRecord sobolev_weighted_difference(const ModelId& model, cplx z, int grid_n);

/// Near-zeros of the squared symbol for m = 0 on the periodic grid of
/// aligned_grid_n(grid_n) - 1 points per axis. Points with indicator below
/// tol_rel / h^2 are clustered by grid adjacency (with wraparound); one
/// representative (the smallest indicator) is returned per cluster. The
/// indicator is scalar_g, or lambda_min - 1 for the 3D forward-backward kinds.
std::vector<Momentum> symbol_zero_census(const ModelId& model, int grid_n, double tol_rel = 1e-6);

}  // namespace dlat
