#include "dlat/potential.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dlat/errors.hpp"
#include "dlat/parallel.hpp"

namespace dlat {

namespace {

constexpr double kPi = std::numbers::pi;

void check_hermitian(const SymbolMatrix& m) {
  if ((m - m.adjoint()).max_abs() > 1e-14 * std::max(1.0, m.max_abs()))
    throw ArgumentError("potential matrix must be Hermitian");
}

LatticeField apply_table(const std::vector<SymbolMatrix>& table, const LatticeField& f) {
  LatticeField g = f;
  to_fourier(g);
  const int nu = g.nu;
  std::array<cplx, 4> tmp{};
  for (std::size_t s = 0; s < g.sites(); ++s) {
    apply(table[s], &g.values[s * nu], tmp.data());
    for (int k = 0; k < nu; ++k) g.values[s * nu + k] = tmp[k];
  }
  from_fourier(g);
  return g;
}

std::pair<LatticeField, SolverReport> solve(const std::vector<SymbolMatrix>& free_res,
                                            const std::function<LatticeField(const LatticeField&)>& h0,
                                            const SampledPotential& v, cplx z, const LatticeField& f,
                                            const SolverOptions& opt) {
  if (!(v.lattice == f.lattice)) throw ArgumentError("potential and field live on different lattices");
  const double fn = f.norm();
  LatticeField u(f.lattice, f.nu);
  SolverReport rep;
  if (fn == 0.0) {
    rep.converged = true;
    return {u, rep};
  }
  auto to_field = [&](const std::vector<cplx>& x) {
    LatticeField w(f.lattice, f.nu);
    w.values = x;
    return w;
  };
  const VectorOp a = [&](const std::vector<cplx>& x, std::vector<cplx>& y) {
    const LatticeField w = to_field(x);
    const LatticeField pw = apply_table(free_res, apply_potential(v, w));
    y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + pw.values[i];
  };
  const std::vector<cplx> b = apply_table(free_res, f).values;
  auto true_residual = [&](const std::vector<cplx>& x) {
    const LatticeField w = to_field(x);
    LatticeField r = h0(w) + apply_potential(v, w);
    r -= z * w;
    r -= f;
    return r.norm() / fn;
  };

  std::vector<cplx> x(b.size(), cplx(0.0));
  double inner_tol = opt.tol;
  int used = 0;
  for (int round = 0; round < 6; ++round) {
    const int budget = opt.max_iter - used;
    if (budget <= 0) break;
    const SolverReport r = opt.fixed_point ? fixed_point(a, b, x, inner_tol, budget)
                                           : gmres(a, b, x, inner_tol, budget, opt.restart);
    used += r.iterations;
    rep.residual = true_residual(x);
    if (rep.residual <= opt.tol) {
      rep.converged = true;
      break;
    }
    if (!r.converged) break;
    inner_tol *= std::max(1e-3, 0.5 * opt.tol / rep.residual);
  }
  rep.iterations = used;
  u.values = x;
  return {u, rep};
}

std::vector<SymbolMatrix> resolvent_table(const PeriodicLattice& lat,
                                          const std::function<SymbolMatrix(const Momentum&)>& sym, cplx z) {
  std::vector<SymbolMatrix> t(lat.sites());
  parallel_for(t.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t s = b; s < e; ++s) t[s] = resolvent_at(sym(lattice_momentum(lat, s)), z);
  });
  return t;
}

// Periodic distance of x to the box centre.
double torus_distance_to_centre(const std::vector<double>& x, double box) {
  double r2 = 0.0;
  for (double xi : x) {
    double t = std::fmod(xi - 0.5 * box, box);
    if (t < -0.5 * box) t += box;
    if (t >= 0.5 * box) t -= box;
    r2 += t * t;
  }
  return std::sqrt(r2);
}

}  // namespace

HolderPotential zero_potential(int d) {
  HolderPotential v;
  v.id = "zero";
  v.d = d;
  const int nu = spinor_dim(d);
  v.eval = [nu](const std::vector<double>&) { return SymbolMatrix(nu); };
  v.theta = 1.0;
  v.constant = true;
  return v;
}

HolderPotential constant_potential(int d, const SymbolMatrix& m) {
  if (m.nu() != spinor_dim(d)) throw ArgumentError("constant_potential: matrix size does not match d");
  check_hermitian(m);
  HolderPotential v;
  v.id = "constant";
  v.d = d;
  v.eval = [m](const std::vector<double>&) { return m; };
  v.theta = 1.0;
  v.holder_const = 0.0;
  v.sup_bound = matrix_norm(m);
  v.constant = true;
  return v;
}

HolderPotential tanh_potential(int d, double amplitude, const SymbolMatrix& m, double box) {
  if (m.nu() != spinor_dim(d)) throw ArgumentError("tanh_potential: matrix size does not match d");
  if (!(box > 0.0)) throw ArgumentError("tanh_potential: box must be > 0");
  check_hermitian(m);
  HolderPotential v;
  v.id = "tanh";
  v.d = d;
  v.eval = [=](const std::vector<double>& x) {
    const double w = box / (2 * kPi) * std::sin(2 * kPi * (x[0] - 0.5 * box) / box);
    return (amplitude * std::tanh(w)) * m;
  };
  v.theta = 1.0;
  v.holder_const = std::abs(amplitude) * matrix_norm(m);
  v.sup_bound = std::abs(amplitude) * matrix_norm(m) * std::tanh(box / (2 * kPi));
  return v;
}

HolderPotential cusp_potential(int d, double amplitude, double theta, const SymbolMatrix& m, double box) {
  if (m.nu() != spinor_dim(d)) throw ArgumentError("cusp_potential: matrix size does not match d");
  if (!(theta > 0.0 && theta <= 1.0)) throw ArgumentError("cusp_potential: theta must lie in (0, 1]");
  if (!(box > 0.0)) throw ArgumentError("cusp_potential: box must be > 0");
  check_hermitian(m);
  HolderPotential v;
  v.id = "cusp";
  v.d = d;
  v.eval = [=](const std::vector<double>& x) {
    return (amplitude * std::pow(torus_distance_to_centre(x, box), theta)) * m;
  };
  v.theta = theta;
  v.holder_const = std::abs(amplitude) * matrix_norm(m);
  v.sup_bound = std::abs(amplitude) * matrix_norm(m) * std::pow(0.5 * box * std::sqrt(double(d)), theta);
  return v;
}

SampledPotential sample_potential(const HolderPotential& v, const PeriodicLattice& lattice) {
  lattice.validate();
  if (v.d != lattice.d) throw ArgumentError("sample_potential: dimension mismatch");
  SampledPotential s;
  s.lattice = lattice;
  s.values.resize(lattice.sites());
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const auto c = site_coords(lattice, i);
    std::vector<double> x(lattice.d);
    for (int j = 0; j < lattice.d; ++j) x[j] = lattice.h * c[j];
    s.values[i] = v.eval(x);
  }
  return s;
}

LatticeField apply_potential(const SampledPotential& v, const LatticeField& f) {
  if (!(v.lattice == f.lattice)) throw ArgumentError("apply_potential: lattice mismatch");
  LatticeField g(f.lattice, f.nu);
  const int nu = f.nu;
  for (std::size_t s = 0; s < f.sites(); ++s) apply(v.values[s], &f.values[s * nu], &g.values[s * nu]);
  return g;
}

std::pair<LatticeField, SolverReport> perturbed_resolvent(const ModelId& model, const SampledPotential& v, cplx z,
                                                          const LatticeField& f, const SolverOptions& opt) {
  model.validate();
  if (!model.discrete()) throw ArgumentError("perturbed_resolvent: model must be discrete");
  if (model.d != f.lattice.d || model.h != f.lattice.h || model.nu() != f.nu)
    throw ArgumentError("perturbed_resolvent: model and lattice do not match");
  const auto table = resolvent_table(f.lattice, [&](const Momentum& xi) { return discrete_symbol(model, xi); }, z);
  return solve(table, [&](const LatticeField& w) { return apply_free_dirac(model, w); }, v, z, f, opt);
}

std::pair<FineGridFunction, SolverReport> continuum_perturbed_resolvent(const ModelId& continuum,
                                                                        const SampledPotential& v, cplx z,
                                                                        const FineGridFunction& f,
                                                                        const SolverOptions& opt) {
  if (continuum.discrete()) throw ArgumentError("continuum_perturbed_resolvent: model must be continuous");
  if (continuum.d != f.lattice.d || continuum.nu() != f.nu) throw ArgumentError("continuum_perturbed_resolvent: shape");
  const auto table =
      resolvent_table(f.lattice, [&](const Momentum& xi) { return continuous_symbol(continuum, xi); }, z);
  return solve(table, [&](const LatticeField& w) { return continuum_apply(continuum, w); }, v, z, f, opt);
}

double theta_prime(double theta, double tau, int d) {
  if (!(theta > 0.0 && theta <= 1.0)) throw ArgumentError("theta_prime: theta must lie in (0, 1]");
  if (!(tau > d)) throw ArgumentError("theta_prime: requires tau > d");
  if (std::isinf(tau)) return theta;
  return 1.0 / (1.0 / theta + 1.0 / (tau - d));
}

double measure_tau(const RieszPair& pair, double x_max) {
  if (!(x_max > 2.0)) throw ArgumentError("measure_tau: x_max must exceed 2");
  const RieszPair p1 = build_pair(pair.kind, 1);
  const double dx = 1.0 / 16.0;
  std::vector<double> xs, vals;
  for (double x = 1.0 - dx; x <= x_max + dx; x += dx) {
    xs.push_back(x);
    vals.push_back(std::abs(p1.psi0({x})));
  }
  std::vector<double> hx, hv;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i)
    if (xs[i] >= 1.0 && xs[i] <= x_max && vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1] && vals[i] > 1e-12) {
      hx.push_back(1.0 + xs[i]);
      hv.push_back(vals[i]);
    }
  if (hx.size() < 3) throw DegenerateDataError("measure_tau: fewer than three envelope points above 1e-12");
  // (1 + x)^{-tau}: the rate fit's slope is -tau.
  const RateFit fit = fit_rate(hx, hv);
  return -fit.slope;
}

double commutator_gap(const RieszPair& pair, const HolderPotential& v, double h,
                      const std::vector<FineGridFunction>& probes) {
  if (pair.kind != PairKind::smooth_biorthogonal)
    throw ArgumentError("commutator_gap: the sinc pair lacks the required decay of psi_0");
  if (probes.empty()) throw ArgumentError("commutator_gap: no probes");
  double worst = 0.0;
  for (const auto& f : probes) {
    const double fn = f.norm();
    if (fn == 0.0) throw ArgumentError("commutator_gap: zero probe");
    const LatticeField kf = discretize_Kh(pair, f, h);
    const SampledPotential vc = sample_potential(v, kf.lattice);
    const SampledPotential vf = sample_potential(v, f.lattice);
    const LatticeField diff = apply_potential(vc, kf) - discretize_Kh(pair, apply_potential(vf, f), h);
    worst = std::max(worst, diff.norm() / fn);
  }
  return worst;
}

std::vector<PerturbedSweepRow> perturbed_convergence_sweep(const PerturbedSweepConfig& cfg, const HolderPotential& v,
                                                           const RieszPair& pair) {
  if (cfg.h_list.empty()) throw ArgumentError("perturbed_convergence_sweep: empty h list");
  if (cfg.z.imag() == 0.0) throw ArgumentError("perturbed_convergence_sweep: z must be non-real");
  if (cfg.probes.empty()) throw ArgumentError("perturbed_convergence_sweep: no probes");
  std::vector<PerturbedSweepRow> rows;
  for (double h : cfg.h_list) {
    const int n = static_cast<int>(std::lround(cfg.box / h));
    if (std::abs(n * h - cfg.box) > 1e-12 * cfg.box) throw ArgumentError("box is not a multiple of h");
    const PeriodicLattice coarse{cfg.d, n, h};
    coarse.validate();
    const PeriodicLattice fine = fine_lattice(coarse, cfg.refinement);
    const ModelId model{cfg.kind, cfg.d, cfg.m, h};
    const ModelId cont{ModelKind::continuous, cfg.d, cfg.m, h};
    const SampledPotential vc = sample_potential(v, coarse);
    const SampledPotential vf = sample_potential(v, fine);
    PerturbedSweepRow row;
    row.record.h = h;
    row.record.grid_n = n;
    row.record.xi_argmax.assign(cfg.d, 0.0);
    for (ProbeKind pk : cfg.probes) {
      const FineGridFunction f = make_probe(pk, fine, h, model.nu(), cfg.seed);
      const LatticeField kf = discretize_Kh(pair, f, h);
      auto [u, rep_h] = perturbed_resolvent(model, vc, cfg.z, kf, cfg.solver);
      if (!rep_h.converged)
        throw std::runtime_error("perturbed solve failed at h = " + std::to_string(h) + " (residual " +
                                 std::to_string(rep_h.residual) + ")");
      auto [w, rep_c] = continuum_perturbed_resolvent(cont, vf, cfg.z, f, cfg.solver);
      if (!rep_c.converged)
        throw std::runtime_error("continuum solve failed at h = " + std::to_string(h) + " (residual " +
                                 std::to_string(rep_c.residual) + ")");
      const FineGridFunction ju = embed_Jh(pair, u, cfg.refinement);
      const double gap = (ju - w).norm() / f.norm();
      row.probe_gaps.push_back(gap);
      row.max_iterations = std::max({row.max_iterations, rep_h.iterations, rep_c.iterations});
    }
    row.record.value = *std::max_element(row.probe_gaps.begin(), row.probe_gaps.end());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dlat
