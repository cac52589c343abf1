#include "dlat/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "dlat/errors.hpp"

namespace dlat {

std::vector<double> dyadic_h_list(int k_first, int k_last) {
  if (k_last < k_first) throw ArgumentError("dyadic_h_list: empty range");
  std::vector<double> h;
  for (int k = k_first; k <= k_last; ++k) h.push_back(std::ldexp(1.0, -k));
  return h;
}

OperatorGapConfig default_operator_gap_config(ModelKind kind, int d, double m) {
  OperatorGapConfig c;
  c.kind = kind;
  c.d = d;
  c.m = m;
  c.probes = all_probes();
  if (d <= 2) {
    c.box = 4.0;
    c.refinement = 8;
    c.h_list = dyadic_h_list(2, 6);
  } else {
    c.box = 4.0;
    c.refinement = 4;
    c.h_list = dyadic_h_list(2, 4);
  }
  return c;
}

std::vector<OperatorGapRow> operator_gap_sweep(const OperatorGapConfig& cfg) {
  if (cfg.h_list.empty()) throw ArgumentError("operator_gap_sweep: empty h list");
  if (cfg.probes.empty()) throw ArgumentError("operator_gap_sweep: no probes");
  const RieszPair pair = build_pair(cfg.pair, cfg.d);
  std::vector<OperatorGapRow> rows;
  for (double h : cfg.h_list) {
    const int n = static_cast<int>(std::lround(cfg.box / h));
    if (std::abs(n * h - cfg.box) > 1e-12 * cfg.box) throw ArgumentError("box is not a multiple of h");
    const PeriodicLattice coarse{cfg.d, n, h};
    coarse.validate();
    const PeriodicLattice fine = fine_lattice(coarse, cfg.refinement);
    const ModelId model{cfg.kind, cfg.d, cfg.m, h};
    OperatorGapRow row;
    row.h = h;
    row.n = n;
    for (ProbeKind pk : cfg.probes) {
      const SpectralProbe f = make_spectral_probe(pk, fine, h, model.nu(), cfg.seed);
      const ProbeGap g = resolvent_gap_spectral(pair, model, cfg.z, f);
      row.probe_gaps.push_back(g);
      row.l2_max = std::max(row.l2_max, g.l2);
      row.h1_max = std::max(row.h1_max, g.h1);
    }
    rows.push_back(row);
  }
  return rows;
}

double composite_norm_estimate(ModelKind kind, int d, double m, cplx z, double h, int n, int refinement,
                               PairKind pair_kind, int iters, std::uint64_t seed) {
  const PeriodicLattice coarse{d, n, h};
  coarse.validate();
  const PeriodicLattice fine = fine_lattice(coarse, refinement);
  const RieszPair pair = build_pair(pair_kind, d);
  const LinearMap t = composite_resolvent_map(pair, ModelId{kind, d, m, h}, z, fine);
  return operator_norm_estimate(t, iters, seed);
}

}  // namespace dlat
