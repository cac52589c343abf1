#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dlat/embedding.hpp"
#include "dlat/krylov.hpp"
#include "dlat/symbol_analysis.hpp"

namespace dlat {

/// Bounded, Hermitian-valued, theta-Hoelder potential on the periodic box.
struct HolderPotential {
  std::string id;
  int d = 1;
  std::function<SymbolMatrix(const std::vector<double>&)> eval;
  double theta = 1.0;
  double holder_const = 0.0;
  double sup_bound = 0.0;
  /// True when V(x) does not depend on x.
  bool constant = false;
};

HolderPotential zero_potential(int d);
/// V(x) = M.
HolderPotential constant_potential(int d, const SymbolMatrix& m);
/// V(x) = a tanh(w(x_1 - L/2)) M with w(y) = (L / 2 pi) sin(2 pi y / L):
/// a periodic kink that equals a tanh(x_1 - L/2) M to third order at the centre.
HolderPotential tanh_potential(int d, double amplitude, const SymbolMatrix& m, double box);
/// V(x) = a r(x)^theta M, r the periodic distance to the box centre.
HolderPotential cusp_potential(int d, double amplitude, double theta, const SymbolMatrix& m, double box);

/// Per-site values V(h k).
struct SampledPotential {
  PeriodicLattice lattice;
  std::vector<SymbolMatrix> values;
};

SampledPotential sample_potential(const HolderPotential& v, const PeriodicLattice& lattice);
LatticeField apply_potential(const SampledPotential& v, const LatticeField& f);

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 500;
  int restart = 40;
  /// Plain fixed-point iteration instead of GMRES (needs ||V R_0|| < 1).
  bool fixed_point = false;
};

/// (H_{0,h} + V_h - z)^{-1} f via GMRES on (I + R_0 V_h) u = R_0 f with R_0 the
/// free resolvent. The report's residual is ||(H_h - z) u - f|| / ||f||.
std::pair<LatticeField, SolverReport> perturbed_resolvent(const ModelId& model, const SampledPotential& v, cplx z,
                                                          const LatticeField& f, const SolverOptions& opt = {});

/// Same for the continuum operator H_0 + V on a fine grid.
std::pair<FineGridFunction, SolverReport> continuum_perturbed_resolvent(const ModelId& continuum,
                                                                        const SampledPotential& v, cplx z,
                                                                        const FineGridFunction& f,
                                                                        const SolverOptions& opt = {});

/// 1/theta' = 1/theta + 1/(tau - d).
double theta_prime(double theta, double tau, int d);

/// Decay exponent of psi_0 from a log-log fit of the upper envelope of
/// |psi_0| along one axis over [1, x_max] (points above 1e-12).
double measure_tau(const RieszPair& pair, double x_max);

/// max over probes of ||V_h K_h f - K_h (V f)|| / ||f||.
double commutator_gap(const RieszPair& pair, const HolderPotential& v, double h,
                      const std::vector<FineGridFunction>& probes);

struct PerturbedSweepConfig {
  ModelKind kind = ModelKind::fb;
  int d = 1;
  double m = 0.0;
  cplx z{0.0, 2.0};
  double box = 4.0;
  int refinement = 8;
  std::vector<double> h_list;
  std::vector<ProbeKind> probes;
  std::uint64_t seed = 1;
  SolverOptions solver;
};

struct PerturbedSweepRow {
  SweepRecord record;
  std::vector<double> probe_gaps;
  int max_iterations = 0;
};

/// Per h: max over probes of ||J_h (H_h - z)^{-1} K_h f - (H - z)^{-1} f|| / ||f||.
/// Throws std::runtime_error when a solve fails to converge.
std::vector<PerturbedSweepRow> perturbed_convergence_sweep(const PerturbedSweepConfig& cfg, const HolderPotential& v,
                                                           const RieszPair& pair);

}  // namespace dlat
