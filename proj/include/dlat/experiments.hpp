#pragma once

#include <cstdint>
#include <vector>

#include "dlat/embedding.hpp"
#include "dlat/symbol_analysis.hpp"

namespace dlat {

/// Full-operator resolvent gaps on a fixed periodic box of side `box`; the
/// coarse lattice at mesh h has n = box / h points per axis.
struct OperatorGapConfig {
  ModelKind kind = ModelKind::s_mod;
  int d = 1;
  double m = 0.0;
  cplx z{0.0, 1.0};
  double box = 4.0;
  int refinement = 8;
  std::vector<double> h_list;
  PairKind pair = PairKind::smooth_biorthogonal;
  std::vector<ProbeKind> probes;
  std::uint64_t seed = 1;
};

struct OperatorGapRow {
  double h = 0.0;
  int n = 0;
  std::vector<ProbeGap> probe_gaps;
  double l2_max = 0.0;
  double h1_max = 0.0;
};

/// Box side and h list used by default: side 4 with h = 1/4 .. 1/64 for
/// d <= 2, side 4 with
/// h = 1/4 .. 1/16 and refinement 4 for d = 3.
OperatorGapConfig default_operator_gap_config(ModelKind kind, int d, double m);

std::vector<OperatorGapRow> operator_gap_sweep(const OperatorGapConfig& cfg);

/// Power-iteration estimate of ||J_h R_h(z) K_h - R(z)|| on the fine grid of
/// an n-point coarse lattice with mesh h and refinement R.
double composite_norm_estimate(ModelKind kind, int d, double m, cplx z, double h, int n, int refinement,
                               PairKind pair, int iters, std::uint64_t seed);

/// h = 2^{-k_first}, ..., 2^{-k_last}.
std::vector<double> dyadic_h_list(int k_first, int k_last);

}  // namespace dlat
