#include "dlat/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dlat/errors.hpp"

namespace dlat {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_dim(const ModelId& model, const Momentum& xi) {
  model.validate();
  if (static_cast<int>(xi.size()) != model.d)
    throw ArgumentError("momentum has " + std::to_string(xi.size()) + " components, model has d = " +
                        std::to_string(model.d));
}

double sin2_half(double t) {
  const double s = std::sin(0.5 * t);
  return s * s;
}

// Assemble the self-adjoint symbol from its diagonal mass term and its
// off-diagonal vector U:
//   d=1: [[M, U1], [conj U1, -M]]
//   d=2: [[M, U1 - i U2], [conj(U1) + i conj(U2), -M]]
//   d=3: [[M 1, U.sigma], [conj(U).sigma, -M 1]]
SymbolMatrix assemble(int d, double mass, const std::vector<cplx>& u) {
  SymbolMatrix g(spinor_dim(d));
  if (d == 1) {
    g(0, 0) = mass;
    g(1, 1) = -mass;
    g(0, 1) = u[0];
    g(1, 0) = std::conj(u[0]);
  } else if (d == 2) {
    g(0, 0) = mass;
    g(1, 1) = -mass;
    g(0, 1) = u[0] - kI * u[1];
    g(1, 0) = std::conj(u[0]) + kI * std::conj(u[1]);
  } else {
    for (int i = 0; i < 2; ++i) {
      g(i, i) = mass;
      g(i + 2, i + 2) = -mass;
    }
    // U.sigma = [[U3, U1 - i U2], [U1 + i U2, -U3]]
    g(0, 2) = u[2];
    g(0, 3) = u[0] - kI * u[1];
    g(1, 2) = u[0] + kI * u[1];
    g(1, 3) = -u[2];
    const cplx v0 = std::conj(u[0]), v1 = std::conj(u[1]), v2 = std::conj(u[2]);
    g(2, 0) = v2;
    g(2, 1) = v0 - kI * v1;
    g(3, 0) = v0 + kI * v1;
    g(3, 1) = -v2;
  }
  return g;
}

double diagonal_mass(const ModelId& model, const Momentum& xi) {
  return model.modified() ? model.m + f_mod(model.d, model.h, xi) : model.m;
}

SymbolMatrix invert_lu(const SymbolMatrix& a) {
  const int n = a.nu();
  SymbolMatrix lu = a;
  SymbolMatrix inv = SymbolMatrix::identity(n);
  const double scale = std::max(a.max_abs(), 1e-300);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(lu(r, col)) > std::abs(lu(piv, col))) piv = r;
    if (std::abs(lu(piv, col)) <= 1e-14 * scale)
      throw SingularMatrixError("resolvent_at: G - z is singular (z in the spectrum of G)");
    if (piv != col)
      for (int c = 0; c < n; ++c) {
        std::swap(lu(piv, c), lu(col, c));
        std::swap(inv(piv, c), inv(col, c));
      }
    const cplx d = 1.0 / lu(col, col);
    for (int c = 0; c < n; ++c) {
      lu(col, c) *= d;
      inv(col, c) *= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const cplx f = lu(r, col);
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        lu(r, c) -= f * lu(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

}  // namespace

int spinor_dim(int d) {
  if (d < 1 || d > 3) throw ArgumentError("dimension must be 1, 2 or 3");
  return d <= 2 ? 2 : 4;
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::continuous: return "continuous";
    case ModelKind::fb: return "fb";
    case ModelKind::s: return "s";
    case ModelKind::fb_mod: return "fb_mod";
    case ModelKind::s_mod: return "s_mod";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  for (ModelKind k : {ModelKind::continuous, ModelKind::fb, ModelKind::s, ModelKind::fb_mod, ModelKind::s_mod})
    if (to_string(k) == name) return k;
  throw ArgumentError("unknown model kind '" + std::string(name) + "'");
}

void ModelId::validate() const {
  if (d < 1 || d > 3) throw ArgumentError("model dimension must be 1, 2 or 3");
  if (!(m >= 0.0)) throw ArgumentError("mass must be >= 0");
  if (discrete() && !(h > 0.0)) throw ArgumentError("mesh size h must be > 0");
}

std::string ModelId::label() const {
  std::ostringstream os;
  os << to_string(kind) << "(d=" << d << ",m=" << m;
  if (discrete()) os << ",h=" << h;
  os << ")";
  return os.str();
}

SymbolMatrix pauli(int j) {
  switch (j) {
    case 1: return SymbolMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    case 2: return SymbolMatrix::from_rows({{0.0, -kI}, {kI, 0.0}});
    case 3: return SymbolMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
    default: throw ArgumentError("pauli: index must be 1, 2 or 3");
  }
}

DiracMatrices dirac_matrices() {
  DiracMatrices dm;
  dm.beta = SymbolMatrix(4);
  for (int i = 0; i < 2; ++i) {
    dm.beta(i, i) = 1.0;
    dm.beta(i + 2, i + 2) = -1.0;
  }
  for (int j = 0; j < 3; ++j) {
    const SymbolMatrix s = pauli(j + 1);
    SymbolMatrix a(4);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        a(r, c + 2) = s(r, c);
        a(r + 2, c) = s(r, c);
      }
    dm.alpha[j] = a;
  }
  return dm;
}

std::vector<cplx> offdiagonal_vector(const ModelId& model, const Momentum& xi) {
  check_dim(model, xi);
  std::vector<cplx> u(model.d);
  const double h = model.h;
  for (int j = 0; j < model.d; ++j) {
    const double t = h * xi[j];
    switch (model.kind) {
      case ModelKind::continuous: u[j] = xi[j]; break;
      case ModelKind::s:
      case ModelKind::s_mod: u[j] = std::sin(t) / h; break;
      case ModelKind::fb:
      case ModelKind::fb_mod:
        // S^-_j = -(1/ih)(e^{-it} - 1) = (sin t)/h - (2i/h) sin^2(t/2), written
        // without the cancellation in e^{-it} - 1.
        u[j] = cplx(std::sin(t) / h, -2.0 * sin2_half(t) / h);
        break;
    }
  }
  return u;
}

SymbolMatrix continuous_symbol(const ModelId& model, const Momentum& xi) {
  if (model.kind != ModelKind::continuous) throw ArgumentError("continuous_symbol: model is discrete");
  check_dim(model, xi);
  return assemble(model.d, model.m, offdiagonal_vector(model, xi));
}

SymbolMatrix discrete_symbol(const ModelId& model, const Momentum& xi) {
  if (!model.discrete()) throw ArgumentError("discrete_symbol: model is continuous");
  check_dim(model, xi);
  return assemble(model.d, diagonal_mass(model, xi), offdiagonal_vector(model, xi));
}

SymbolMatrix symbol(const ModelId& model, const Momentum& xi) {
  return model.discrete() ? discrete_symbol(model, xi) : continuous_symbol(model, xi);
}

double f_mod(int d, double h, const Momentum& xi) {
  if (!(h > 0.0)) throw ArgumentError("f_mod: h must be > 0");
  if (static_cast<int>(xi.size()) != d) throw ArgumentError("f_mod: momentum/dimension mismatch");
  double f = 0.0;
  for (int j = 0; j < d; ++j) f += 4.0 / h * sin2_half(h * xi[j]);
  return f;
}

double scalar_g(const ModelId& model, const Momentum& xi) {
  check_dim(model, xi);
  const int d = model.d;
  const double h = model.h, m = model.m;

  if (model.kind == ModelKind::continuous) {
    double g = m * m;
    for (double x : xi) g += x * x;
    return g;
  }
  const bool fb = model.kind == ModelKind::fb || model.kind == ModelKind::fb_mod;
  if (fb && d == 3)
    throw UnsupportedModelError("scalar_g: the 3D forward-backward square is not scalar; use squared_symbol_eigs");

  const double mass = diagonal_mass(model, xi);
  double g = mass * mass;
  if (!fb) {
    for (int j = 0; j < d; ++j) {
      const double s = std::sin(h * xi[j]);
      g += s * s / (h * h);
    }
    return g;
  }
  for (int j = 0; j < d; ++j) g += 4.0 / (h * h) * sin2_half(h * xi[j]);
  if (d == 2) {
    const double t1 = h * xi[0], t2 = h * xi[1];
    g += 2.0 / (h * h) * (std::sin(t1 - t2) - std::sin(t1) + std::sin(t2));
  }
  return g;
}

SquaredSymbolEigs squared_symbol_eigs(const ModelId& model, const Momentum& xi) {
  check_dim(model, xi);
  const double mass = model.discrete() ? diagonal_mass(model, xi) : model.m;
  if (model.d < 3) {
    const double g = scalar_g(model, xi);
    return {1.0 + g, 1.0 + g};
  }
  const auto u = offdiagonal_vector(model, xi);
  double s2 = 0.0;
  for (const auto& c : u) s2 += std::norm(c);
  std::array<cplx, 3> v{std::conj(u[0]), std::conj(u[1]), std::conj(u[2])};
  const cplx c0 = u[1] * v[2] - u[2] * v[1];
  const cplx c1 = u[2] * v[0] - u[0] * v[2];
  const cplx c2 = u[0] * v[1] - u[1] * v[0];
  const double cross = std::sqrt(std::norm(c0) + std::norm(c1) + std::norm(c2));
  const double base = 1.0 + mass * mass + s2;
  return {base - cross, base + cross};
}

SymbolMatrix resolvent_at(const SymbolMatrix& g, cplx z) {
  const int n = g.nu();
  const SymbolMatrix sq = g * g;
  const cplx gval = sq.trace() / static_cast<double>(n);
  const double scale = std::max(sq.max_abs(), 1e-300);
  bool scalar = true;
  for (int r = 0; r < n && scalar; ++r)
    for (int c = 0; c < n; ++c) {
      const cplx expect = (r == c) ? gval : cplx(0.0);
      if (std::abs(sq(r, c) - expect) > 1e-14 * scale) {
        scalar = false;
        break;
      }
    }
  if (scalar) {
    const cplx den = gval - z * z;
    if (std::abs(den) <= 1e-14 * (std::abs(gval) + std::norm(z)) || den == 0.0)
      throw SingularMatrixError("resolvent_at: G - z is singular (z in the spectrum of G)");
    SymbolMatrix r = g;
    for (int i = 0; i < n; ++i) r(i, i) += z;
    return r * (1.0 / den);
  }
  SymbolMatrix shifted = g;
  for (int i = 0; i < n; ++i) shifted(i, i) -= z;
  return invert_lu(shifted);
}

double matrix_norm(const SymbolMatrix& m) {
  const int n = m.nu();
  if (n == 1) return std::abs(m(0, 0));
  if (n == 2) {
    // M = a0 1 + a.sigma  =>  M^H M = alpha 1 + w.sigma with
    // alpha = |a0|^2 + |a|^2 and w = 2 Re(conj(a0) a) + i (conj(a) x a) (real).
    const cplx a0 = 0.5 * (m(0, 0) + m(1, 1));
    const cplx a3 = 0.5 * (m(0, 0) - m(1, 1));
    const cplx a1 = 0.5 * (m(0, 1) + m(1, 0));
    const cplx a2 = 0.5 * kI * (m(0, 1) - m(1, 0));
    const double alpha = std::norm(a0) + std::norm(a1) + std::norm(a2) + std::norm(a3);
    const cplx c0 = std::conj(a2) * a3 - std::conj(a3) * a2;
    const cplx c1 = std::conj(a3) * a1 - std::conj(a1) * a3;
    const cplx c2 = std::conj(a1) * a2 - std::conj(a2) * a1;
    const double w1 = 2.0 * (std::conj(a0) * a1).real() - c0.imag();
    const double w2 = 2.0 * (std::conj(a0) * a2).real() - c1.imag();
    const double w3 = 2.0 * (std::conj(a0) * a3).real() - c2.imag();
    return std::sqrt(alpha + std::sqrt(w1 * w1 + w2 * w2 + w3 * w3));
  }
  const auto ev = hermitian_eigenvalues(m.adjoint() * m);
  return std::sqrt(std::max(ev[n - 1], 0.0));
}

}  // namespace dlat
