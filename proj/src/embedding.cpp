#include "dlat/embedding.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <map>
#include <mutex>
#include <random>

#include "dlat/errors.hpp"
#include "dlat/fft.hpp"
#include "dlat/parallel.hpp"

namespace dlat {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double plateau(double t) {
  const double a = std::abs(t);
  if (a <= kPi / 2) return 1.0;
  if (a >= 1.5 * kPi) return 0.0;
  return 1.0 - smooth_step((a - kPi / 2) / kPi);
}

double plateau_periodisation(double t) {
  double s = 0.0;
  for (int j = -2; j <= 2; ++j) {
    const double b = plateau(t + kTwoPi * j);
    s += b * b;
  }
  return s;
}

bool in_sinc_box(double t) { return t >= -kPi && t < kPi; }

// (1/pi) int_0^{3pi/2} w(t) cos(x t) dt by the trapezoid rule; w vanishes
// to all orders at the upper end.
double cosine_transform(const RieszPair& pair, bool phi, double x) {
  constexpr int M = 6144;
  const double top = 1.5 * kPi, dt = top / M;
  double s = 0.5 * (phi ? pair.phi_factor(0.0) : pair.psi_factor(0.0));
  for (int i = 1; i < M; ++i) {
    const double t = i * dt;
    s += (phi ? pair.phi_factor(t) : pair.psi_factor(t)) * std::cos(x * t);
  }
  return s * dt / kPi;
}

double sinc_pi(double x) { return x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x); }

struct Layout {
  int d, n, nf, R;
};

// Coarse DFT index of fine DFT index p along one axis, and the alias j.
inline void fold(int p, const Layout& L, int& q, int& j) {
  const int cf = centered_index(p, L.nf);
  int c = ((cf + L.n / 2) % L.n + L.n) % L.n - L.n / 2;
  j = (cf - c) / L.n;
  q = c < 0 ? c + L.n : c;
}

inline int unfold(int q, int j, const Layout& L) {
  const int cf = centered_index(q, L.n) + j * L.n;
  return cf < 0 ? cf + L.nf : cf;
}

int infer_refinement(const PeriodicLattice& fine, double h, int& n_coarse) {
  const double ratio = h / fine.h;
  const int R = static_cast<int>(std::lround(ratio));
  if (R < 4 || std::abs(ratio - R) > 1e-9 * ratio || (R & (R - 1)) != 0 || fine.n % R != 0)
    throw ArgumentError("fine grid must refine h by a power-of-two factor R >= 4");
  n_coarse = fine.n / R;
  PeriodicLattice{fine.d, n_coarse, h}.validate();
  return R;
}

// Factor values w(h xi) along one axis for every fine DFT index.
std::vector<double> fine_axis_weights(const RieszPair& pair, bool phi, const Layout& L) {
  std::vector<double> w(L.nf);
  for (int p = 0; p < L.nf; ++p) {
    const double t = kTwoPi * centered_index(p, L.nf) / L.n;
    w[p] = phi ? pair.phi_factor(t) : pair.psi_factor(t);
  }
  return w;
}

std::vector<int> fine_coords(std::size_t s, int d, int nf) {
  std::vector<int> c(d);
  for (int j = d - 1; j >= 0; --j) {
    c[j] = static_cast<int>(s % nf);
    s /= nf;
  }
  return c;
}

// (G(xi) - z)^{-1} x for the continuum symbol via (G + z) x / (m^2 + |xi|^2 - z^2).
void continuum_resolvent_apply(int d, double m, const double* xi, cplx z, const cplx* x, cplx* y) {
  double g = m * m;
  for (int a = 0; a < d; ++a) g += xi[a] * xi[a];
  const cplx den = g - z * z;
  if (std::abs(den) <= 1e-14 * (g + std::norm(z))) throw SingularMatrixError("continuum symbol minus z is singular");
  const cplx I(0.0, 1.0);
  if (d == 1) {
    y[0] = m * x[0] + xi[0] * x[1];
    y[1] = xi[0] * x[0] - m * x[1];
  } else if (d == 2) {
    y[0] = m * x[0] + (xi[0] - I * xi[1]) * x[1];
    y[1] = (xi[0] + I * xi[1]) * x[0] - m * x[1];
  } else {
    const cplx um = xi[0] - I * xi[1], up = xi[0] + I * xi[1];
    const cplx s0 = xi[2] * x[2] + um * x[3], s1 = up * x[2] - xi[2] * x[3];
    const cplx t0 = xi[2] * x[0] + um * x[1], t1 = up * x[0] - xi[2] * x[1];
    y[0] = m * x[0] + s0;
    y[1] = m * x[1] + s1;
    y[2] = t0 - m * x[2];
    y[3] = t1 - m * x[3];
  }
  const int nu = d == 3 ? 4 : 2;
  for (int k = 0; k < nu; ++k) y[k] = (y[k] + z * x[k]) / den;
}

}  // namespace

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

std::string_view to_string(PairKind kind) {
  return kind == PairKind::orthonormal_sinc ? "orthonormal_sinc" : "smooth_biorthogonal";
}

PairKind parse_pair_kind(std::string_view name) {
  if (name == "orthonormal_sinc" || name == "sinc") return PairKind::orthonormal_sinc;
  if (name == "smooth_biorthogonal" || name == "smooth") return PairKind::smooth_biorthogonal;
  throw ArgumentError("unknown pair kind '" + std::string(name) + "'");
}

double RieszPair::psi_factor(double t) const {
  return kind == PairKind::orthonormal_sinc ? (in_sinc_box(t) ? 1.0 : 0.0) : plateau(t);
}

double RieszPair::phi_factor(double t) const {
  if (kind == PairKind::orthonormal_sinc) return in_sinc_box(t) ? 1.0 : 0.0;
  const double b = plateau(t);
  return b == 0.0 ? 0.0 : b / plateau_periodisation(t);
}

double RieszPair::psi_hat(const Momentum& xi) const {
  if (static_cast<int>(xi.size()) != d) throw ArgumentError("psi_hat: dimension mismatch");
  double v = std::pow(kTwoPi, -0.5 * d);
  for (double t : xi) v *= psi_factor(t);
  return v;
}

double RieszPair::phi_hat(const Momentum& xi) const {
  if (static_cast<int>(xi.size()) != d) throw ArgumentError("phi_hat: dimension mismatch");
  double v = std::pow(kTwoPi, -0.5 * d);
  for (double t : xi) v *= phi_factor(t);
  return v;
}

double RieszPair::psi0(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != d) throw ArgumentError("psi0: dimension mismatch");
  double v = 1.0;
  for (double xj : x) v *= kind == PairKind::orthonormal_sinc ? sinc_pi(xj) : cosine_transform(*this, false, xj);
  return v;
}

double RieszPair::phi0(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != d) throw ArgumentError("phi0: dimension mismatch");
  double v = 1.0;
  for (double xj : x) v *= kind == PairKind::orthonormal_sinc ? sinc_pi(xj) : cosine_transform(*this, true, xj);
  return v;
}

RieszPair build_pair(PairKind kind, int d) {
  if (d < 1 || d > 3) throw ArgumentError("build_pair: d must be 1, 2 or 3");
  RieszPair p;
  p.kind = kind;
  p.d = d;
  p.c0 = 0.5 * std::pow(kTwoPi, -0.5 * d);
  p.tau = kind == PairKind::orthonormal_sinc ? 1.0 : std::numeric_limits<double>::infinity();
  return p;
}

PeriodicLattice fine_lattice(const PeriodicLattice& coarse, int R) {
  coarse.validate();
  if (R < 4 || (R & (R - 1)) != 0) throw ArgumentError("refinement R must be a power of two >= 4");
  return PeriodicLattice{coarse.d, coarse.n * R, coarse.h / R};
}

void embed_hat(const RieszPair& pair, bool use_phi, const LatticeField& u_hat, FineGridFunction& out_hat) {
  const PeriodicLattice& cl = u_hat.lattice;
  const PeriodicLattice& fl = out_hat.lattice;
  if (pair.d != cl.d || fl.d != cl.d || out_hat.nu != u_hat.nu) throw ArgumentError("embed: shape mismatch");
  int n_coarse = 0;
  const int R = infer_refinement(fl, cl.h, n_coarse);
  if (n_coarse != cl.n) throw ArgumentError("embed: fine grid does not cover the coarse box");
  const Layout L{cl.d, cl.n, fl.n, R};
  const auto w = fine_axis_weights(pair, use_phi, L);
  // (2 pi)^{d/2} R^{d/2} w_hat(h xi); the (2 pi)^{d/2} cancels the factor normalisation.
  const double scale = std::pow(static_cast<double>(R), 0.5 * L.d);
  const int nu = u_hat.nu;
  parallel_for(fl.sites(), [&](std::size_t b, std::size_t e) {
    for (std::size_t s = b; s < e; ++s) {
      const auto pc = fine_coords(s, L.d, L.nf);
      double wt = scale;
      std::size_t qs = 0;
      for (int a = 0; a < L.d; ++a) {
        int q, j;
        fold(pc[a], L, q, j);
        wt *= w[pc[a]];
        qs = qs * L.n + q;
      }
      for (int k = 0; k < nu; ++k) out_hat.values[s * nu + k] = wt == 0.0 ? cplx(0.0) : wt * u_hat.values[qs * nu + k];
    }
  });
}

void discretize_hat(const RieszPair& pair, bool use_psi, const FineGridFunction& f_hat, LatticeField& out_hat) {
  const PeriodicLattice& cl = out_hat.lattice;
  const PeriodicLattice& fl = f_hat.lattice;
  if (pair.d != cl.d || fl.d != cl.d || out_hat.nu != f_hat.nu) throw ArgumentError("discretize: shape mismatch");
  int n_coarse = 0;
  const int R = infer_refinement(fl, cl.h, n_coarse);
  if (n_coarse != cl.n) throw ArgumentError("discretize: fine grid does not cover the coarse box");
  const Layout L{cl.d, cl.n, fl.n, R};
  const auto w = fine_axis_weights(pair, !use_psi, L);
  const double scale = std::pow(static_cast<double>(R), -0.5 * L.d);
  const int nu = f_hat.nu;
  int njs = 1;
  for (int a = 0; a < L.d; ++a) njs *= 3;
  parallel_for(cl.sites(), [&](std::size_t b, std::size_t e) {
    for (std::size_t s = b; s < e; ++s) {
      const auto qc = fine_coords(s, L.d, L.n);
      std::array<cplx, 4> acc{};
      for (int o = 0; o < njs; ++o) {
        int t = o;
        double wt = scale;
        std::size_t ps = 0;
        for (int a = 0; a < L.d; ++a) {
          const int j = t % 3 - 1;
          t /= 3;
          const int p = unfold(qc[a], j, L);
          wt *= w[p];
          ps = ps * L.nf + p;
        }
        if (wt == 0.0) continue;
        for (int k = 0; k < nu; ++k) acc[k] += wt * f_hat.values[ps * nu + k];
      }
      for (int k = 0; k < nu; ++k) out_hat.values[s * nu + k] = acc[k];
    }
  });
}

namespace {

FineGridFunction embed_impl(const RieszPair& pair, bool use_phi, const LatticeField& u, int R) {
  LatticeField u_hat = u;
  to_fourier(u_hat);
  FineGridFunction out(fine_lattice(u.lattice, R), u.nu);
  embed_hat(pair, use_phi, u_hat, out);
  from_fourier(out);
  return out;
}

LatticeField discretize_impl(const RieszPair& pair, bool use_psi, const FineGridFunction& f, double h) {
  int n_coarse = 0;
  infer_refinement(f.lattice, h, n_coarse);
  FineGridFunction f_hat = f;
  to_fourier(f_hat);
  LatticeField out(PeriodicLattice{f.lattice.d, n_coarse, h}, f.nu);
  discretize_hat(pair, use_psi, f_hat, out);
  from_fourier(out);
  return out;
}

}  // namespace

FineGridFunction embed_Jh(const RieszPair& pair, const LatticeField& u, int R) { return embed_impl(pair, true, u, R); }
FineGridFunction embed_with_psi(const RieszPair& pair, const LatticeField& u, int R) {
  return embed_impl(pair, false, u, R);
}
LatticeField discretize_Kh(const RieszPair& pair, const FineGridFunction& f, double h) {
  return discretize_impl(pair, true, f, h);
}
LatticeField discretize_with_phi(const RieszPair& pair, const FineGridFunction& f, double h) {
  return discretize_impl(pair, false, f, h);
}

FineGridFunction continuum_resolvent(const ModelId& continuum, cplx z, const FineGridFunction& f) {
  if (continuum.discrete()) throw ArgumentError("continuum_resolvent: model must be continuous");
  if (continuum.d != f.lattice.d || continuum.nu() != f.nu) throw ArgumentError("continuum_resolvent: shape mismatch");
  return apply_symbol_multiplier([&](const Momentum& xi) { return resolvent_at(continuous_symbol(continuum, xi), z); },
                                 f);
}

FineGridFunction continuum_apply(const ModelId& continuum, const FineGridFunction& f) {
  if (continuum.discrete()) throw ArgumentError("continuum_apply: model must be continuous");
  if (continuum.d != f.lattice.d || continuum.nu() != f.nu) throw ArgumentError("continuum_apply: shape mismatch");
  return apply_symbol_multiplier([&](const Momentum& xi) { return continuous_symbol(continuum, xi); }, f);
}

double h1_norm(const FineGridFunction& f) {
  FineGridFunction g = f;
  to_fourier(g);
  double s = 0.0;
  for (std::size_t site = 0; site < g.sites(); ++site) {
    const Momentum xi = lattice_momentum(g.lattice, site);
    double k2 = 1.0;
    for (double x : xi) k2 += x * x;
    for (int k = 0; k < g.nu; ++k) s += k2 * std::norm(g.at(site, k));
  }
  return std::sqrt(std::pow(g.lattice.h, g.lattice.d) * s);
}

ProbeGap resolvent_gap_on_probe(const RieszPair& pair, const ModelId& model, cplx z, const FineGridFunction& f) {
  model.validate();
  if (!model.discrete()) throw ArgumentError("resolvent_gap_on_probe: model must be discrete");
  if (model.d != f.lattice.d || model.nu() != f.nu || pair.d != model.d)
    throw ArgumentError("resolvent_gap_on_probe: dimension mismatch");
  int n_coarse = 0;
  infer_refinement(f.lattice, model.h, n_coarse);
  const PeriodicLattice coarse{model.d, n_coarse, model.h};
  const ModelId cont{ModelKind::continuous, model.d, model.m, model.h};

  FineGridFunction f_hat = f;
  to_fourier(f_hat);
  double f2 = 0.0, f2h1 = 0.0;
  for (std::size_t s = 0; s < f_hat.sites(); ++s) {
    const Momentum xi = lattice_momentum(f_hat.lattice, s);
    double k2 = 1.0;
    for (double x : xi) k2 += x * x;
    for (int k = 0; k < f_hat.nu; ++k) {
      f2 += std::norm(f_hat.at(s, k));
      f2h1 += k2 * std::norm(f_hat.at(s, k));
    }
  }
  if (f2 == 0.0) throw ArgumentError("resolvent_gap_on_probe: zero probe");

  LatticeField u_hat(coarse, f.nu);
  discretize_hat(pair, true, f_hat, u_hat);
  multiply_in_fourier([&](const Momentum& xi) { return resolvent_at(discrete_symbol(model, xi), z); }, u_hat);
  FineGridFunction out(f.lattice, f.nu);
  embed_hat(pair, true, u_hat, out);
  multiply_in_fourier([&](const Momentum& xi) { return resolvent_at(continuous_symbol(cont, xi), z); }, f_hat);
  double d2 = 0.0;
  for (std::size_t i = 0; i < out.values.size(); ++i) d2 += std::norm(out.values[i] - f_hat.values[i]);
  ProbeGap g;
  g.l2 = std::sqrt(d2 / f2);
  g.h1 = std::sqrt(d2 / f2h1);
  return g;
}

LinearMap composite_resolvent_map(const RieszPair& pair, const ModelId& model, cplx z, const PeriodicLattice& fine) {
  model.validate();
  if (!model.discrete() || model.d != fine.d || pair.d != model.d)
    throw ArgumentError("composite_resolvent_map: invalid model");
  int n_coarse = 0;
  infer_refinement(fine, model.h, n_coarse);
  const PeriodicLattice coarse{model.d, n_coarse, model.h};
  const int nu = model.nu();
  const ModelId cont{ModelKind::continuous, model.d, model.m, model.h};

  struct Tables {
    std::vector<SymbolMatrix> rh, rh_adj, rc, rc_adj;
  };
  auto tab = std::make_shared<Tables>();
  for (std::size_t s = 0; s < coarse.sites(); ++s) {
    const SymbolMatrix r = resolvent_at(discrete_symbol(model, lattice_momentum(coarse, s)), z);
    tab->rh.push_back(r);
    tab->rh_adj.push_back(r.adjoint());
  }
  for (std::size_t s = 0; s < fine.sites(); ++s) {
    const SymbolMatrix r = resolvent_at(continuous_symbol(cont, lattice_momentum(fine, s)), z);
    tab->rc.push_back(r);
    tab->rc_adj.push_back(r.adjoint());
  }
  auto run = [pair, coarse, fine, nu, tab](bool adj, const std::vector<cplx>& x, std::vector<cplx>& y) {
    FineGridFunction xf(fine, nu);
    xf.values = x;
    LatticeField c(coarse, nu);
    // Forward: J R_h K - R.  Adjoint: K^* R_h^* J^* - R^*, with K^* the psi
    // embedding and J^* the phi discretisation.
    discretize_hat(pair, !adj, xf, c);
    const auto& rh = adj ? tab->rh_adj : tab->rh;
    std::array<cplx, 4> tmp{};
    for (std::size_t s = 0; s < coarse.sites(); ++s) {
      apply(rh[s], &c.values[s * nu], tmp.data());
      for (int k = 0; k < nu; ++k) c.values[s * nu + k] = tmp[k];
    }
    FineGridFunction out(fine, nu);
    embed_hat(pair, !adj, c, out);
    const auto& rc = adj ? tab->rc_adj : tab->rc;
    y.resize(x.size());
    for (std::size_t s = 0; s < fine.sites(); ++s) {
      apply(rc[s], &x[s * nu], tmp.data());
      for (int k = 0; k < nu; ++k) y[s * nu + k] = out.values[s * nu + k] - tmp[k];
    }
  };
  LinearMap m;
  m.in_size = m.out_size = fine.sites() * nu;
  m.apply = [run](const std::vector<cplx>& x, std::vector<cplx>& y) { run(false, x, y); };
  m.adjoint = [run](const std::vector<cplx>& x, std::vector<cplx>& y) { run(true, x, y); };
  return m;
}

namespace {

LinearMap jk_map(const RieszPair& pair, const PeriodicLattice& coarse, int R, bool embed) {
  const PeriodicLattice fine = fine_lattice(coarse, R);
  const int nu = spinor_dim(coarse.d);
  LinearMap m;
  const std::size_t nc = coarse.sites() * nu, nf = fine.sites() * nu;
  const double wc = std::pow(coarse.h, coarse.d), wf = std::pow(fine.h, fine.d);
  auto up = [pair, coarse, fine, nu](bool phi, const std::vector<cplx>& x, std::vector<cplx>& y) {
    LatticeField c(coarse, nu);
    c.values = x;
    FineGridFunction out(fine, nu);
    embed_hat(pair, phi, c, out);
    y = std::move(out.values);
  };
  auto down = [pair, coarse, fine, nu](bool psi, const std::vector<cplx>& x, std::vector<cplx>& y) {
    FineGridFunction f(fine, nu);
    f.values = x;
    LatticeField out(coarse, nu);
    discretize_hat(pair, psi, f, out);
    y = std::move(out.values);
  };
  if (embed) {
    m.in_size = nc;
    m.out_size = nf;
    m.in_weight = wc;
    m.out_weight = wf;
    m.apply = [up](const std::vector<cplx>& x, std::vector<cplx>& y) { up(true, x, y); };
    m.adjoint = [down](const std::vector<cplx>& x, std::vector<cplx>& y) { down(false, x, y); };
  } else {
    m.in_size = nf;
    m.out_size = nc;
    m.in_weight = wf;
    m.out_weight = wc;
    m.apply = [down](const std::vector<cplx>& x, std::vector<cplx>& y) { down(true, x, y); };
    m.adjoint = [up](const std::vector<cplx>& x, std::vector<cplx>& y) { up(false, x, y); };
  }
  return m;
}

}  // namespace

LinearMap embedding_map(const RieszPair& pair, const PeriodicLattice& coarse, int R) {
  return jk_map(pair, coarse, R, true);
}

LinearMap discretization_map(const RieszPair& pair, const PeriodicLattice& coarse, int R) {
  return jk_map(pair, coarse, R, false);
}

std::string_view to_string(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::gaussian: return "gaussian";
    case ProbeKind::small_packet: return "small_packet";
    case ProbeKind::medium_packet: return "medium_packet";
    case ProbeKind::edge_packet: return "edge_packet";
    case ProbeKind::random_band: return "random_band";
  }
  return "?";
}

const std::vector<ProbeKind>& all_probes() {
  static const std::vector<ProbeKind> v{ProbeKind::gaussian, ProbeKind::small_packet, ProbeKind::medium_packet,
                                        ProbeKind::edge_packet, ProbeKind::random_band};
  return v;
}

namespace {

constexpr int kBandModes = 1;

double envelope_width(double L) { return L / 4.0; }

}  // namespace

void SpectralProbe::coeff(const int* p, cplx* out) const {
  const int d = fine.d, nf = fine.n;
  if (separable) {
    cplx v = 1.0;
    for (int a = 0; a < d; ++a) v *= axis_hat[a][p[a]];
    for (int k = 0; k < nu; ++k) out[k] = v * spinor[k];
    return;
  }
  std::size_t o = 0, stride = 1;
  for (int a = 0; a < d; ++a) {
    const int c = centered_index(p[a], nf);
    if (c < -kmax || c > kmax) {
      for (int k = 0; k < nu; ++k) out[k] = 0.0;
      return;
    }
    o += static_cast<std::size_t>(c + kmax) * stride;
    stride *= 2 * kmax + 1;
  }
  for (int k = 0; k < nu; ++k) out[k] = band[o * nu + k];
}

FineGridFunction SpectralProbe::to_field() const {
  FineGridFunction f(fine, nu);
  std::vector<int> p(fine.d);
  for (std::size_t s = 0; s < f.sites(); ++s) {
    p = site_coords(fine, s);
    coeff(p.data(), &f.values[s * nu]);
  }
  from_fourier(f);
  return f;
}

SpectralProbe make_spectral_probe(ProbeKind kind, const PeriodicLattice& fine, double h, int nu,
                                  std::uint64_t seed) {
  fine.validate();
  if (nu != spinor_dim(fine.d)) throw ArgumentError("make_probe: nu does not match the dimension");
  if (!(h > 0.0)) throw ArgumentError("make_probe: h must be > 0");
  const int d = fine.d, nf = fine.n;
  const double L = fine.side();
  SpectralProbe pr;
  pr.fine = fine;
  pr.nu = nu;
  double sum2 = 0.0;

  if (kind == ProbeKind::random_band) {
    pr.separable = false;
    pr.kmax = kBandModes;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    int modes = 1;
    for (int a = 0; a < d; ++a) modes *= 2 * pr.kmax + 1;
    pr.band.resize(static_cast<std::size_t>(modes) * nu);
    for (auto& c : pr.band) {
      const double re = nd(rng), im = nd(rng);
      c = cplx(re, im);
      sum2 += std::norm(c);
    }
    const double scale = 1.0 / std::sqrt(std::pow(fine.h, d) * sum2);
    for (auto& c : pr.band) c *= scale;
    return pr;
  }

  const double sigma = envelope_width(L);
  std::vector<double> carrier(d, 0.0);
  if (kind == ProbeKind::small_packet) carrier[0] = kTwoPi / L;
  if (kind == ProbeKind::medium_packet)
    for (int a = 0; a < d; ++a) carrier[a] = a == 0 ? kPi / (2 * h) : (a == 1 ? -kPi / (2 * h) : 0.0);
  if (kind == ProbeKind::edge_packet)
    for (int a = 0; a < d; ++a) carrier[a] = kPi / h;
  // Per-axis factors: periodised Gaussian envelope times the carrier wave.
  pr.axis_hat.assign(d, std::vector<cplx>(nf));
  double prod = 1.0;
  for (int a = 0; a < d; ++a) {
    auto& ax = pr.axis_hat[a];
    for (int i = 0; i < nf; ++i) {
      const double x = fine.h * i;
      double env = 0.0;
      for (int img = -2; img <= 2; ++img) {
        const double r = x - 0.5 * L - img * L;
        env += std::exp(-r * r / (2 * sigma * sigma));
      }
      ax[i] = env * std::polar(1.0, carrier[a] * x);
    }
    fft_forward(1, nf, 1, ax.data());
    double s2 = 0.0;
    for (const auto& c : ax) s2 += std::norm(c);
    prod *= s2;
  }
  const std::array<cplx, 4> spinor{cplx(1.0, 0.0), cplx(0.0, 0.5), cplx(-0.25, 0.0), cplx(0.0, 0.125)};
  double sp2 = 0.0;
  for (int k = 0; k < nu; ++k) sp2 += std::norm(spinor[k]);
  const double scale = 1.0 / std::sqrt(std::pow(fine.h, d) * prod * sp2);
  for (int k = 0; k < nu; ++k) pr.spinor[k] = spinor[k] * scale;
  return pr;
}

FineGridFunction make_probe(ProbeKind kind, const PeriodicLattice& fine, double h, int nu, std::uint64_t seed) {
  return make_spectral_probe(kind, fine, h, nu, seed).to_field();
}

ProbeGap resolvent_gap_spectral(const RieszPair& pair, const ModelId& model, cplx z, const SpectralProbe& probe) {
  model.validate();
  if (!model.discrete()) throw ArgumentError("resolvent_gap_spectral: model must be discrete");
  if (model.d != probe.fine.d || model.nu() != probe.nu || pair.d != model.d)
    throw ArgumentError("resolvent_gap_spectral: dimension mismatch");
  int n_coarse = 0;
  const int R = infer_refinement(probe.fine, model.h, n_coarse);
  const PeriodicLattice coarse{model.d, n_coarse, model.h};
  const Layout L{model.d, n_coarse, probe.fine.n, R};
  const int d = L.d, nu = probe.nu;
  const auto wpsi = fine_axis_weights(pair, false, L);
  const auto wphi = fine_axis_weights(pair, true, L);
  const double sk = std::pow(static_cast<double>(R), -0.5 * d), sj = 1.0 / sk;
  const double dk = kTwoPi / probe.fine.side();
  int njs = 1, nal = 1;
  for (int a = 0; a < d; ++a) {
    njs *= 3;
    nal *= R;
  }

  std::mutex mu;
  std::map<std::size_t, std::array<double, 3>> partial;
  parallel_for(coarse.sites(), [&](std::size_t b, std::size_t e) {
    std::array<double, 3> acc{};
    std::vector<int> p(d);
    std::array<double, 3> xi{};
    std::array<cplx, 4> fv{}, kf{}, v{}, rf{};
    for (std::size_t s = b; s < e; ++s) {
      const auto qc = site_coords(coarse, s);
      kf.fill(0.0);
      for (int o = 0; o < njs; ++o) {
        int t = o;
        double wt = sk;
        for (int a = 0; a < d; ++a) {
          p[a] = unfold(qc[a], t % 3 - 1, L);
          t /= 3;
          wt *= wpsi[p[a]];
        }
        if (wt == 0.0) continue;
        probe.coeff(p.data(), fv.data());
        for (int k = 0; k < nu; ++k) kf[k] += wt * fv[k];
      }
      apply(resolvent_at(discrete_symbol(model, lattice_momentum(coarse, s)), z), kf.data(), v.data());
      for (int o = 0; o < nal; ++o) {
        int t = o;
        double wt = sj, k2 = 1.0;
        for (int a = 0; a < d; ++a) {
          p[a] = qc[a] + (t % R) * L.n;
          t /= R;
          wt *= wphi[p[a]];
          xi[a] = dk * centered_index(p[a], L.nf);
          k2 += xi[a] * xi[a];
        }
        probe.coeff(p.data(), fv.data());
        double f2 = 0.0;
        for (int k = 0; k < nu; ++k) f2 += std::norm(fv[k]);
        if (f2 != 0.0) continuum_resolvent_apply(d, model.m, xi.data(), z, fv.data(), rf.data());
        else rf.fill(0.0);
        double d2 = 0.0;
        for (int k = 0; k < nu; ++k) d2 += std::norm(wt * v[k] - rf[k]);
        acc[0] += d2;
        acc[1] += f2;
        acc[2] += k2 * f2;
      }
    }
    std::lock_guard<std::mutex> lock(mu);
    partial[b] = acc;
  });
  double d2 = 0.0, f2 = 0.0, f2h1 = 0.0;
  for (const auto& [b, a] : partial) {
    d2 += a[0];
    f2 += a[1];
    f2h1 += a[2];
  }
  if (f2 == 0.0) throw ArgumentError("resolvent_gap_spectral: zero probe");
  ProbeGap g;
  g.l2 = std::sqrt(d2 / f2);
  g.h1 = std::sqrt(d2 / f2h1);
  return g;
}

}  // namespace dlat
