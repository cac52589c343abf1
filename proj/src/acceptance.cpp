#include "dlat/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

#include "dlat/errors.hpp"
#include "dlat/experiments.hpp"
#include "dlat/potential.hpp"

namespace dlat {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI{0.0, 1.0};

class Log {
 public:
  bool pass = true;

  void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4))) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    os_ << (ok ? "  ok   " : "  FAIL ") << buf << '\n';
    pass = pass && ok;
  }
  void note(const std::string& s) { os_ << "       " << s << '\n'; }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

std::string kind_name(ModelKind k) { return std::string(to_string(k)); }

double max_dev(const SymbolMatrix& a, const SymbolMatrix& b) { return (a - b).max_abs(); }

SymbolMatrix random_hermitian(int nu, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  SymbolMatrix g(nu);
  for (int r = 0; r < nu; ++r) {
    g(r, r) = nd(rng);
    for (int c = r + 1; c < nu; ++c) {
      g(r, c) = cplx(nd(rng), nd(rng));
      g(c, r) = std::conj(g(r, c));
    }
  }
  return g;
}

// ---------------------------------------------------------------- 1
void algebraic_identities(Log& log) {
  constexpr int kDraws = 10000;
  std::mt19937_64 rng(20240101);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  const SymbolMatrix id2 = SymbolMatrix::identity(2), id4 = SymbolMatrix::identity(4);

  // Pauli products sigma_j sigma_k = delta_jk + i eps_jkl sigma_l.
  double dev = 0.0;
  for (int j = 1; j <= 3; ++j)
    for (int k = 1; k <= 3; ++k) {
      SymbolMatrix rhs = j == k ? id2 : SymbolMatrix(2);
      if (j != k) {
        const int l = 6 - j - k;
        const double eps = ((j % 3) + 1 == k) ? 1.0 : -1.0;
        rhs += kI * eps * pauli(l);
      }
      dev = std::max(dev, max_dev(pauli(j) * pauli(k), rhs));
    }
  for (int t = 0; t < kDraws; ++t) {
    double a[3], b[3];
    for (int j = 0; j < 3; ++j) {
      a[j] = ud(rng);
      b[j] = ud(rng);
    }
    SymbolMatrix sa(2), sb(2), rhs = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) * id2;
    const double cr[3] = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    for (int j = 0; j < 3; ++j) {
      sa += a[j] * pauli(j + 1);
      sb += b[j] * pauli(j + 1);
      rhs += kI * cr[j] * pauli(j + 1);
    }
    dev = std::max(dev, max_dev(sa * sb, rhs));
  }
  log.check(dev < 1e-11, "Pauli relations: max deviation %.2e", dev);

  // Dirac matrices.
  const DiracMatrices dm = dirac_matrices();
  dev = 0.0;
  for (int j = 0; j < 3; ++j) {
    dev = std::max(dev, max_dev(dm.alpha[j] * dm.beta + dm.beta * dm.alpha[j], SymbolMatrix(4)));
    for (int k = 0; k < 3; ++k)
      dev = std::max(dev, max_dev(dm.alpha[j] * dm.alpha[k] + dm.alpha[k] * dm.alpha[j],
                                  j == k ? 2.0 * id4 : SymbolMatrix(4)));
  }
  dev = std::max(dev, max_dev(dm.beta * dm.beta, id4));
  for (int t = 0; t < kDraws; ++t) {
    const double a0 = ud(rng), a1 = ud(rng), a2 = ud(rng), b = ud(rng);
    const SymbolMatrix g = a0 * dm.alpha[0] + a1 * dm.alpha[1] + a2 * dm.alpha[2] + b * dm.beta;
    dev = std::max(dev, max_dev(g * g, (a0 * a0 + a1 * a1 + a2 * a2 + b * b) * id4));
  }
  log.check(dev < 1e-11, "Dirac anticommutation: max deviation %.2e", dev);

  // Scalar squares G^2 = g 1, relative to 1 + g.
  struct Family {
    ModelKind kind;
    int d;
  };
  const std::vector<Family> fams{{ModelKind::continuous, 1}, {ModelKind::continuous, 2}, {ModelKind::continuous, 3},
                                 {ModelKind::fb, 1},         {ModelKind::s, 1},          {ModelKind::fb_mod, 1},
                                 {ModelKind::s_mod, 1},      {ModelKind::fb, 2},         {ModelKind::s, 2},
                                 {ModelKind::fb_mod, 2},     {ModelKind::s_mod, 2},      {ModelKind::s, 3},
                                 {ModelKind::s_mod, 3}};
  std::uniform_real_distribution<double> uh(0.01, 1.0), um(0.0, 2.0);
  dev = 0.0;
  for (int t = 0; t < kDraws; ++t) {
    const Family& f = fams[t % fams.size()];
    const ModelId model{f.kind, f.d, um(rng), uh(rng)};
    Momentum xi(f.d);
    for (auto& x : xi) x = ud(rng) * kPi / model.h;
    const SymbolMatrix g = symbol(model, xi);
    const double gs = scalar_g(model, xi);
    dev = std::max(dev, max_dev(g * g, gs * SymbolMatrix::identity(model.nu())) / (1.0 + gs));
  }
  log.check(dev < 1e-11, "scalar squares (relative to 1 + g): max deviation %.2e", dev);

  // Pauli cross identity for complex U, W.
  dev = 0.0;
  for (int t = 0; t < kDraws; ++t) {
    cplx u[3], w[3];
    for (int j = 0; j < 3; ++j) {
      u[j] = cplx(ud(rng), ud(rng));
      w[j] = cplx(ud(rng), ud(rng));
    }
    SymbolMatrix su(2), sw(2), rhs = (u[0] * w[0] + u[1] * w[1] + u[2] * w[2]) * id2;
    const cplx cr[3] = {u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]};
    for (int j = 0; j < 3; ++j) {
      su += u[j] * pauli(j + 1);
      sw += w[j] * pauli(j + 1);
      rhs += kI * cr[j] * pauli(j + 1);
    }
    dev = std::max(dev, max_dev(su * sw, rhs));
  }
  log.check(dev < 1e-11, "Pauli cross identity: max deviation %.2e", dev);

  // ||G - i|| = ||G^2 + 1||^{1/2}, ||(G - i)^{-1}|| = ||(G^2 + 1)^{-1}||^{1/2}.
  dev = 0.0;
  for (int t = 0; t < kDraws; ++t) {
    const int nu = t % 2 ? 4 : 2;
    const SymbolMatrix g = random_hermitian(nu, rng);
    const SymbolMatrix one = SymbolMatrix::identity(nu);
    const SymbolMatrix sq = g * g + one;
    const double n1 = matrix_norm(g - kI * one), n2 = std::sqrt(matrix_norm(sq));
    const double r1 = matrix_norm(resolvent_at(g, kI));
    const double r2 = std::sqrt(matrix_norm(resolvent_at(sq, 0.0)));
    dev = std::max({dev, std::abs(n1 - n2) / n2, std::abs(r1 - r2) / r2});
  }
  log.check(dev < 1e-11, "norm identities on random 2x2 / 4x4 Hermitian G: max relative deviation %.2e", dev);

  // Extreme eigenvalues of 1 + G^2 for the 3D forward-backward kinds.
  dev = 0.0;
  for (int t = 0; t < kDraws; ++t) {
    const ModelId model{t % 2 ? ModelKind::fb_mod : ModelKind::fb, 3, um(rng), uh(rng)};
    Momentum xi(3);
    for (auto& x : xi) x = ud(rng) * kPi / model.h;
    const SymbolMatrix g = discrete_symbol(model, xi);
    const auto ev = hermitian_eigenvalues(g * g + SymbolMatrix::identity(4));
    const SquaredSymbolEigs se = squared_symbol_eigs(model, xi);
    dev = std::max({dev, std::abs(ev[0] - se.lambda_min) / ev[3], std::abs(ev[3] - se.lambda_max) / ev[3]});
  }
  log.check(dev < 1e-11, "3D forward-backward squared-symbol eigenvalues: max relative deviation %.2e", dev);
}

// ---------------------------------------------------------------- 2, 4
struct RateModel {
  ModelKind kind;
  int d;
};

const std::vector<RateModel>& rate_models() {
  static const std::vector<RateModel> v{{ModelKind::fb, 1},     {ModelKind::s_mod, 1},  {ModelKind::fb_mod, 2},
                                        {ModelKind::s_mod, 2},  {ModelKind::fb_mod, 3}, {ModelKind::s_mod, 3}};
  return v;
}

void symbol_rates(Log& log) {
  const auto hs = dyadic_h_list(4, 8);
  for (const auto& rm : rate_models())
    for (double m : {0.0, 1.0}) {
      const auto recs = convergence_sweep(rm.kind, rm.d, m, kI, hs, default_grid_n(rm.d));
      const RateFit fit = fit_rate(recs);
      const std::size_t k = recs.size();
      const double q1 = recs[k - 2].value / recs[k - 3].value, q2 = recs[k - 1].value / recs[k - 2].value;
      const bool ok = fit.slope >= 0.9 && fit.slope <= 1.1 && q1 >= 0.45 && q1 <= 0.55 && q2 >= 0.45 && q2 <= 0.55;
      log.check(ok, "%-6s d=%d m=%g: slope %.4f, ratios %.4f %.4f", kind_name(rm.kind).c_str(), rm.d, m, fit.slope, q1,
                q2);
    }
}

void z_uniformity(Log& log) {
  const auto hs = dyadic_h_list(4, 8);
  for (const auto& rm : rate_models())
    for (double m : {0.0, 1.0}) {
      std::vector<cplx> zs{kI, 2.0 * kI, 1.0 + kI, -kI};
      if (m > 0.0) zs.push_back(m / 2);
      std::vector<double> slopes;
      for (cplx z : zs) slopes.push_back(fit_rate(convergence_sweep(rm.kind, rm.d, m, z, hs, default_grid_n(rm.d))).slope);
      const auto [lo, hi] = std::minmax_element(slopes.begin(), slopes.end());
      std::ostringstream os;
      for (double s : slopes) os << ' ' << std::fixed << std::setprecision(4) << s;
      log.check(*hi - *lo < 0.1, "%-6s d=%d m=%g: slopes over z {i, 2i, 1+i, -i%s}:%s, spread %.4f",
                kind_name(rm.kind).c_str(), rm.d, m, m > 0 ? ", m/2" : "", os.str().c_str(), *hi - *lo);
    }
}

// ---------------------------------------------------------------- 3
void nonconvergence_floors(Log& log) {
  struct Pair {
    ModelKind a, b;
    int d;
  };
  const std::vector<Pair> pairs{{ModelKind::fb, ModelKind::s, 1},
                                {ModelKind::s, ModelKind::s_mod, 2},
                                {ModelKind::fb, ModelKind::fb_mod, 2},
                                {ModelKind::fb, ModelKind::fb_mod, 3}};
  const auto hs = dyadic_h_list(0, 8);
  const double floor3d = 1.0 - 1.0 / std::sqrt(17.0);
  for (const auto& p : pairs)
    for (double m : {0.0, 1.0}) {
      double worst = 1e300, worst_witness = 0.0, min_measured = 1e300;
      for (double h : hs) {
        const WitnessReport r = nonconvergence_witness(ModelId{p.a, p.d, m, h}, ModelId{p.b, p.d, m, h}, h);
        worst = std::min(worst, r.measured - r.closed_form);
        if (p.d <= 2) worst_witness = std::max(worst_witness, std::abs(r.at_witness - r.closed_form));
        min_measured = std::min(min_measured, r.measured);
      }
      log.check(worst >= -1e-9, "%s vs %s d=%d m=%g: min(measured - closed form) over h = 1..1/256: %.3e",
                kind_name(p.a).c_str(), kind_name(p.b).c_str(), p.d, m, worst);
      if (p.d <= 2)
        log.check(worst_witness <= 1e-9, "  value at the witness momentum equals the closed form: max dev %.2e",
                  worst_witness);
      if (p.d == 3 && m == 0.0)
        log.check(min_measured >= floor3d, "  3D floor: min measured %.6f >= 1 - 17^{-1/2} = %.6f", min_measured,
                  floor3d);
    }
  const double v1 = witness_closed_form(ModelId{ModelKind::fb, 1, 0.0, 1.0}, ModelId{ModelKind::s, 1, 0.0, 1.0});
  log.check(std::abs(v1 - 2.0 / std::sqrt(5.0)) < 1e-12, "1D m=0 h=1 closed form %.12f = 2/sqrt(5)", v1);
  const double v2 =
      witness_closed_form(ModelId{ModelKind::s, 2, 0.0, 1e-6}, ModelId{ModelKind::s_mod, 2, 0.0, 1e-6});
  log.check(std::abs(v2 - 1.0) < 1e-9, "2D s m=0 closed form as h -> 0: %.12f -> 1", v2);
}

// ---------------------------------------------------------------- 5
std::vector<cplx> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<cplx> v(n);
  for (auto& c : v) c = cplx(nd(rng), nd(rng));
  return v;
}

double rel_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0.0, n = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += std::norm(a[i] - b[i]);
    n += std::norm(b[i]);
  }
  return std::sqrt(d / n);
}

void embedding_identities(Log& log) {
  std::mt19937_64 rng(5);
  struct Case {
    int d, n, R;
  };
  const std::vector<Case> cases{{1, 256, 8}, {2, 64, 8}, {3, 16, 4}};
  for (PairKind pk : {PairKind::orthonormal_sinc, PairKind::smooth_biorthogonal}) {
    for (const auto& c : cases) {
      const RieszPair pair = build_pair(pk, c.d);
      const PeriodicLattice coarse{c.d, c.n, 4.0 / c.n};
      const LinearMap j = embedding_map(pair, coarse, c.R), k = discretization_map(pair, coarse, c.R);
      const auto u = random_vector(j.in_size, rng);
      std::vector<cplx> ju, kju;
      j.apply(u, ju);
      k.apply(ju, kju);
      const double e1 = rel_diff(kju, u);
      const auto f = random_vector(k.in_size, rng);
      std::vector<cplx> kf, jkf, kjkf, jkjkf;
      k.apply(f, kf);
      j.apply(kf, jkf);
      k.apply(jkf, kjkf);
      j.apply(kjkf, jkjkf);
      const double e2 = rel_diff(jkjkf, jkf);
      log.check(e1 < 1e-10 && e2 < 1e-10, "%s d=%d n=%d: ||K J u - u|| %.2e, ||(J K)^2 f - J K f|| %.2e",
                std::string(to_string(pk)).c_str(), c.d, c.n, e1, e2);
    }
    for (const auto& c : cases) {
      const RieszPair pair = build_pair(pk, c.d);
      std::vector<double> jn, kn;
      for (int t = 0; t < 3; ++t) {
        const int n = (c.d == 3 ? 4 : 16) << t;
        const PeriodicLattice coarse{c.d, n, 4.0 / n};
        jn.push_back(operator_norm_estimate(embedding_map(pair, coarse, 4), 40, 11));
        kn.push_back(operator_norm_estimate(discretization_map(pair, coarse, 4), 40, 13));
      }
      auto spread = [](const std::vector<double>& v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return (*hi - *lo) / *hi;
      };
      log.check(spread(jn) < 0.05 && spread(kn) < 0.05,
                "%s d=%d: ||J_h|| %.4f %.4f %.4f, ||K_h|| %.4f %.4f %.4f over h = 1/%d..1/%d (variation %.2f%%, %.2f%%)",
                std::string(to_string(pk)).c_str(), c.d, jn[0], jn[1], jn[2], kn[0], kn[1], kn[2], c.d == 3 ? 1 : 4,
                c.d == 3 ? 4 : 16, 100 * spread(jn), 100 * spread(kn));
    }
  }
}

// ---------------------------------------------------------------- 6, 7
RateFit fit_rows(const std::vector<OperatorGapRow>& rows, bool h1) {
  std::vector<double> h, v;
  for (const auto& r : rows) {
    h.push_back(r.h);
    v.push_back(h1 ? r.h1_max : r.l2_max);
  }
  return fit_rate(h, v);
}

void full_operator_rates(Log& log) {
  const std::vector<RateModel> models{{ModelKind::fb, 1},     {ModelKind::fb_mod, 1}, {ModelKind::s_mod, 1},
                                      {ModelKind::fb_mod, 2}, {ModelKind::s_mod, 2},  {ModelKind::fb_mod, 3},
                                      {ModelKind::s_mod, 3}};
  for (const auto& rm : models)
    for (double m : {0.0, 1.0}) {
      const OperatorGapConfig cfg = default_operator_gap_config(rm.kind, rm.d, m);
      const auto rows = operator_gap_sweep(cfg);
      const RateFit fit = fit_rows(rows, false);
      const double lo = rm.d == 3 ? 0.8 : 0.85, hi = rm.d == 3 ? 1.2 : 1.15;
      log.check(fit.slope >= lo && fit.slope <= hi, "%-6s d=%d m=%g: L2 gap slope %.4f in [%.2f, %.2f] (n = %d..%d, R = %d)",
                kind_name(rm.kind).c_str(), rm.d, m, fit.slope, lo, hi, rows.front().n, rows.back().n,
                cfg.refinement);
    }
}

void sobolev_split(Log& log) {
  const std::vector<RateModel> models{{ModelKind::s, 1}, {ModelKind::s, 2}, {ModelKind::fb, 2}};
  constexpr double kFloor = 0.3;
  for (const auto& rm : models) {
    for (double m : {0.0, 1.0}) {
      OperatorGapConfig cfg = default_operator_gap_config(rm.kind, rm.d, m);
      cfg.h_list = dyadic_h_list(3, 6);
      const RateFit fit = fit_rows(operator_gap_sweep(cfg), true);
      log.check(fit.slope >= 0.85 && fit.slope <= 1.2, "%-2s d=%d m=%g: H1-normalised gap slope %.4f in [0.85, 1.2]",
                kind_name(rm.kind).c_str(), rm.d, m, fit.slope);
    }
    const int n = rm.d == 1 ? 64 : 32, R = rm.d == 1 ? 8 : 4;
    std::ostringstream os;
    double lowest = 1e300;
    for (double h : dyadic_h_list(3, 6)) {
      const double e = composite_norm_estimate(rm.kind, rm.d, 0.0, kI, h, n, R, PairKind::smooth_biorthogonal, 30, 3);
      lowest = std::min(lowest, e);
      os << ' ' << std::fixed << std::setprecision(4) << e;
    }
    log.check(lowest >= kFloor, "%-2s d=%d m=0: composite L2 norm estimates over h = 1/8..1/64:%s (floor %.1f)",
              kind_name(rm.kind).c_str(), rm.d, os.str().c_str(), kFloor);
  }
  // Calibration: the symbol-level difference at the doubler momentum.
  const ModelId s1{ModelKind::s, 1, 0.0, 1.0 / 64};
  const ModelId c1{ModelKind::continuous, 1, 0.0, 1.0 / 64};
  const Momentum xi{kPi / s1.h};
  const double sym = matrix_norm(resolvent_at(discrete_symbol(s1, xi), kI) - resolvent_at(continuous_symbol(c1, xi), kI));
  log.note("calibration: symbol-level resolvent difference at h xi = pi (1D s, h = 1/64): " + std::to_string(sym));
}

// ---------------------------------------------------------------- 8
void doubling_census(Log& log) {
  for (int d = 1; d <= 3; ++d) {
    const auto zs = symbol_zero_census(ModelId{ModelKind::s, d, 0.0, 1.0}, default_grid_n(d));
    const auto zm = symbol_zero_census(ModelId{ModelKind::s_mod, d, 0.0, 1.0}, default_grid_n(d));
    const int expect = 1 << d;
    log.check(static_cast<int>(zs.size()) == expect && zm.size() == 1,
              "d=%d: s zeros %zu (expected %d), s_mod zeros %zu (expected 1)", d, zs.size(), expect, zm.size());
  }
}

// ---------------------------------------------------------------- 9
void perturbed_rate(Log& log) {
  const RieszPair pair = build_pair(PairKind::smooth_biorthogonal, 1);
  PerturbedSweepConfig cfg;
  cfg.kind = ModelKind::fb;
  cfg.d = 1;
  cfg.m = 0.0;
  cfg.z = 2.0 * kI;
  cfg.box = 4.0;
  cfg.refinement = 8;
  cfg.h_list = dyadic_h_list(2, 6);
  cfg.probes = all_probes();

  const int n_min = static_cast<int>(std::lround(cfg.box / cfg.h_list.front()));
  const double tau = measure_tau(pair, n_min / 2.0);
  const HolderPotential v = tanh_potential(1, 0.5, pauli(1), cfg.box);
  const double tp = theta_prime(v.theta, tau, 1);
  const auto rows = perturbed_convergence_sweep(cfg, v, pair);
  std::vector<SweepRecord> recs;
  int iters = 0;
  for (const auto& r : rows) {
    recs.push_back(r.record);
    iters = std::max(iters, r.max_iterations);
  }
  const RateFit fit = fit_rate(recs);
  log.check(fit.slope >= 0.8 * tp, "V = 0.5 tanh sigma_1: slope %.4f >= 0.8 theta' = %.4f (tau %.3f, theta' %.4f, max GMRES its %d)",
            fit.slope, 0.8 * tp, tau, tp, iters);

  // V = 0 against the free operator-gap sweep.
  OperatorGapConfig oc;
  oc.kind = cfg.kind;
  oc.d = 1;
  oc.m = cfg.m;
  oc.z = cfg.z;
  oc.box = cfg.box;
  oc.refinement = cfg.refinement;
  oc.h_list = cfg.h_list;
  oc.probes = cfg.probes;
  oc.seed = cfg.seed;
  const auto zero_rows = perturbed_convergence_sweep(cfg, zero_potential(1), pair);
  const auto free_rows = operator_gap_sweep(oc);
  double dev = 0.0;
  for (std::size_t i = 0; i < zero_rows.size(); ++i)
    dev = std::max(dev, std::abs(zero_rows[i].record.value - free_rows[i].l2_max));
  log.check(dev <= 1e-9, "V = 0 reproduces the free gaps: max deviation %.2e", dev);

  // Constant V = c sigma_3 is a mass shift.
  constexpr double c = 0.5;
  const HolderPotential vc = constant_potential(1, c * pauli(3));
  const PeriodicLattice lat{1, 64, 1.0 / 16};
  LatticeField f(lat, 2);
  std::mt19937_64 rng(9);
  f.values = random_vector(f.values.size(), rng);
  const ModelId model{ModelKind::fb, 1, cfg.m, lat.h};
  const auto [u, rep] = perturbed_resolvent(model, sample_potential(vc, lat), cfg.z, f, cfg.solver);
  const LatticeField u0 = free_resolvent(ModelId{ModelKind::fb, 1, cfg.m + c, lat.h}, cfg.z, f);
  const double e = (u - u0).norm() / f.norm();
  log.check(rep.converged && e <= cfg.solver.tol, "constant V = %.1f sigma_3 vs free solve with mass m + %.1f: %.2e (tol %.0e)", c,
            c, e, cfg.solver.tol);
  oc.m = cfg.m + c;
  const auto shifted = operator_gap_sweep(oc);
  const auto const_rows = perturbed_convergence_sweep(cfg, vc, pair);
  double sdev = 0.0;
  for (std::size_t i = 0; i < const_rows.size(); ++i)
    sdev = std::max(sdev, std::abs(const_rows[i].record.value - shifted[i].l2_max) / shifted[i].l2_max);
  std::vector<SweepRecord> crecs;
  for (const auto& r : const_rows) crecs.push_back(r.record);
  log.check(sdev <= 1e-6, "constant-V sweep equals the shifted-mass free sweep: max relative deviation %.2e, slope %.4f",
            sdev, fit_rate(crecs).slope);
}

// ---------------------------------------------------------------- 10
void lattice_correctness(Log& log) {
  std::mt19937_64 rng(10);
  const std::vector<ModelKind> kinds{ModelKind::fb, ModelKind::s, ModelKind::fb_mod, ModelKind::s_mod};
  double stencil = 0.0, adj = 0.0, resid = 0.0, first = 0.0;
  for (int d = 1; d <= 3; ++d) {
    const int n = d == 3 ? 8 : 16;
    const PeriodicLattice lat{d, n, 0.25};
    const int nu = spinor_dim(d);
    LatticeField f(lat, nu), w(lat, nu);
    f.values = random_vector(f.values.size(), rng);
    w.values = random_vector(w.values.size(), rng);
    for (int a = 0; a < d; ++a) {
      const cplx l = apply_difference(DifferenceOp::forward, a, f).inner(w);
      const cplx r = f.inner(apply_difference(DifferenceOp::backward, a, w));
      adj = std::max(adj, std::abs(l - r) / (f.norm() * w.norm() / lat.h));
    }
    for (ModelKind k : kinds)
      for (double m : {0.0, 1.0}) {
        const ModelId model{k, d, m, lat.h};
        const LatticeField a = apply_free_dirac(model, f);
        const LatticeField b = apply_symbol_multiplier([&](const Momentum& xi) { return discrete_symbol(model, xi); }, f);
        stencil = std::max(stencil, (a - b).norm() / f.norm());
        std::vector<cplx> zs{kI, 1.0 + kI, -2.0 * kI};
        if (m > 0.0) zs.push_back(m / 2);
        for (cplx z : zs) {
          const LatticeField u = free_resolvent(model, z, f);
          resid = std::max(resid, (apply_free_dirac(model, u) - z * u - f).norm() / f.norm());
        }
        const cplx z1 = kI, z2 = 0.5 - 2.0 * kI;
        const LatticeField lhs = free_resolvent(model, z1, f) - free_resolvent(model, z2, f);
        const LatticeField rhs = (z1 - z2) * free_resolvent(model, z1, free_resolvent(model, z2, f));
        first = std::max(first, (lhs - rhs).norm() / f.norm());
      }
  }
  log.check(stencil <= 1e-11, "stencil vs Fourier multiplier: max relative deviation %.2e", stencil);
  log.check(adj <= 1e-12, "<D+ u, w> = <u, D- w>: max relative deviation %.2e", adj);
  log.check(resid <= 1e-10, "free resolvent residuals ||(H - z) u - f|| / ||f||: max %.2e", resid);
  log.check(first <= 1e-10, "first resolvent identity: max relative deviation %.2e", first);
}

struct Entry {
  const char* name;
  std::function<void(Log&)> run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> v{
      {"algebraic identities", algebraic_identities},
      {"symbol convergence rates", symbol_rates},
      {"non-convergence floors", nonconvergence_floors},
      {"uniformity in z", z_uniformity},
      {"embedding identities", embedding_identities},
      {"full-operator convergence", full_operator_rates},
      {"Sobolev / strong convergence split", sobolev_split},
      {"fermion doubling census", doubling_census},
      {"perturbed-operator rate", perturbed_rate},
      {"lattice correctness", lattice_correctness},
  };
  return v;
}

}  // namespace

std::string criterion_name(int id) {
  if (id < 1 || id > kCriterionCount) throw ArgumentError("criterion id must be in 1.." + std::to_string(kCriterionCount));
  return entries()[id - 1].name;
}

CriterionResult run_criterion(int id) {
  CriterionResult res;
  res.id = id;
  res.name = criterion_name(id);
  const auto t0 = std::chrono::steady_clock::now();
  Log log;
  try {
    entries()[id - 1].run(log);
    res.pass = log.pass;
    res.detail = log.str();
  } catch (const std::exception& e) {
    res.pass = false;
    res.detail = log.str() + "  FAIL exception: " + e.what() + "\n";
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace dlat
