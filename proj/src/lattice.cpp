#include "dlat/lattice.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "dlat/errors.hpp"
#include "dlat/fft.hpp"
#include "dlat/parallel.hpp"

namespace dlat {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr cplx kI{0.0, 1.0};

void check_field(const LatticeField& f) {
  f.lattice.validate();
  if (f.values.size() != f.sites() * f.nu) throw ArgumentError("field storage does not match its lattice");
}

std::size_t stride(const PeriodicLattice& lat, int axis) {
  std::size_t s = 1;
  for (int j = lat.d - 1; j > axis; --j) s *= lat.n;
  return s;
}

// Site index of (site + off * e_axis) with wraparound.
inline std::size_t neighbour(std::size_t site, std::size_t str, int n, int coord, int off) {
  const int c = ((coord + off) % n + n) % n;
  return site + (static_cast<std::ptrdiff_t>(c) - coord) * static_cast<std::ptrdiff_t>(str);
}

template <class T>
void put_le(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw ArgumentError("snapshot: truncated file");
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

std::size_t PeriodicLattice::sites() const {
  std::size_t s = 1;
  for (int j = 0; j < d; ++j) s *= static_cast<std::size_t>(n);
  return s;
}

void PeriodicLattice::validate() const {
  if (d < 1 || d > 3) throw ArgumentError("lattice dimension must be 1, 2 or 3");
  if (n < 4 || (n & (n - 1)) != 0) throw ArgumentError("lattice size n must be a power of two >= 4");
  if (!(h > 0.0)) throw ArgumentError("lattice spacing must be > 0");
}

int centered_index(int q, int n) {
  if (n <= 0 || q < 0 || q >= n) throw ArgumentError("centered_index: q out of range");
  return q < n / 2 ? q : q - n;
}

std::vector<int> site_coords(const PeriodicLattice& lat, std::size_t site) {
  std::vector<int> c(lat.d);
  for (int j = lat.d - 1; j >= 0; --j) {
    c[j] = static_cast<int>(site % lat.n);
    site /= lat.n;
  }
  return c;
}

std::size_t site_index(const PeriodicLattice& lat, const std::vector<int>& coords) {
  std::size_t s = 0;
  for (int j = 0; j < lat.d; ++j) s = s * lat.n + static_cast<std::size_t>(((coords[j] % lat.n) + lat.n) % lat.n);
  return s;
}

Momentum lattice_momentum(const PeriodicLattice& lat, std::size_t site) {
  Momentum xi(lat.d);
  const double step = 2.0 * kPi / (lat.n * lat.h);
  for (int j = lat.d - 1; j >= 0; --j) {
    xi[j] = step * centered_index(static_cast<int>(site % lat.n), lat.n);
    site /= lat.n;
  }
  return xi;
}

LatticeField::LatticeField(const PeriodicLattice& lat, int nu_) : lattice(lat), nu(nu_) {
  lattice.validate();
  if (nu < 1 || nu > SymbolMatrix::kMaxDim) throw ArgumentError("field: nu must be in [1,4]");
  values.assign(lattice.sites() * nu, cplx(0.0));
}

double LatticeField::norm() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return std::sqrt(std::pow(lattice.h, lattice.d) * s);
}

cplx LatticeField::inner(const LatticeField& w) const {
  if (!same_shape(w)) throw ArgumentError("inner: shape mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += std::conj(values[i]) * w.values[i];
  return std::pow(lattice.h, lattice.d) * s;
}

LatticeField& LatticeField::operator+=(const LatticeField& w) {
  if (!same_shape(w)) throw ArgumentError("field +=: shape mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += w.values[i];
  return *this;
}

LatticeField& LatticeField::operator-=(const LatticeField& w) {
  if (!same_shape(w)) throw ArgumentError("field -=: shape mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= w.values[i];
  return *this;
}

LatticeField& LatticeField::operator*=(cplx s) {
  for (auto& v : values) v *= s;
  return *this;
}

LatticeField operator+(LatticeField a, const LatticeField& b) { return a += b; }
LatticeField operator-(LatticeField a, const LatticeField& b) { return a -= b; }
LatticeField operator*(cplx s, LatticeField a) { return a *= s; }

void to_fourier(LatticeField& f) {
  check_field(f);
  fft_forward(f.lattice.d, f.lattice.n, f.nu, f.values.data());
}

void from_fourier(LatticeField& f) {
  check_field(f);
  fft_inverse(f.lattice.d, f.lattice.n, f.nu, f.values.data());
}

LatticeField apply_difference(DifferenceOp op, int axis, const LatticeField& f) {
  check_field(f);
  const PeriodicLattice& lat = f.lattice;
  if (op != DifferenceOp::laplacian && (axis < 0 || axis >= lat.d))
    throw ArgumentError("apply_difference: axis out of range");
  LatticeField out(lat, f.nu);
  const int nu = f.nu, n = lat.n;
  const double h = lat.h;
  const cplx inv_ih = 1.0 / (kI * h);
  const double inv_h2 = 1.0 / (h * h);
  std::vector<std::size_t> strides(lat.d);
  for (int j = 0; j < lat.d; ++j) strides[j] = stride(lat, j);

  parallel_for(lat.sites(), [&](std::size_t b, std::size_t e) {
    for (std::size_t s = b; s < e; ++s) {
      auto coord = [&](int j) { return static_cast<int>((s / strides[j]) % n); };
      cplx* o = &out.values[s * nu];
      const cplx* u = &f.values[s * nu];
      if (op == DifferenceOp::laplacian) {
        for (int j = 0; j < lat.d; ++j) {
          const int c = coord(j);
          const cplx* up = &f.values[neighbour(s, strides[j], n, c, 1) * nu];
          const cplx* dn = &f.values[neighbour(s, strides[j], n, c, -1) * nu];
          for (int k = 0; k < nu; ++k) o[k] += inv_h2 * (2.0 * u[k] - up[k] - dn[k]);
        }
        continue;
      }
      const int c = coord(axis);
      const cplx* up = &f.values[neighbour(s, strides[axis], n, c, 1) * nu];
      const cplx* dn = &f.values[neighbour(s, strides[axis], n, c, -1) * nu];
      for (int k = 0; k < nu; ++k) {
        switch (op) {
          case DifferenceOp::forward: o[k] = inv_ih * (up[k] - u[k]); break;
          case DifferenceOp::backward: o[k] = inv_ih * (u[k] - dn[k]); break;
          case DifferenceOp::symmetric: o[k] = 0.5 * inv_ih * (up[k] - dn[k]); break;
          case DifferenceOp::laplacian: break;
        }
      }
    }
  });
  return out;
}

LatticeField apply_free_dirac(const ModelId& model, const LatticeField& f) {
  model.validate();
  check_field(f);
  if (!model.discrete()) throw ArgumentError("apply_free_dirac: model must be discrete");
  if (model.d != f.lattice.d || model.h != f.lattice.h || model.nu() != f.nu)
    throw ArgumentError("apply_free_dirac: model and lattice do not match");
  const int d = model.d, nu = f.nu;
  const bool fb = model.kind == ModelKind::fb || model.kind == ModelKind::fb_mod;
  // Upper-right blocks use the backward difference (symbol S^-), lower-left
  // the forward one (S^+ = conj S^-); symmetric kinds use D^s for both.
  std::vector<LatticeField> up, low;
  for (int j = 0; j < d; ++j) {
    up.push_back(apply_difference(fb ? DifferenceOp::backward : DifferenceOp::symmetric, j, f));
    low.push_back(fb ? apply_difference(DifferenceOp::forward, j, f) : up.back());
  }
  LatticeField mass = f;
  mass *= model.m;
  if (model.modified()) {
    LatticeField lap = apply_difference(DifferenceOp::laplacian, 0, f);
    lap *= model.h;
    mass += lap;
  }
  LatticeField out(f.lattice, nu);
  const std::size_t ns = f.sites();
  for (std::size_t s = 0; s < ns; ++s) {
    const cplx* mu = &mass.values[s * nu];
    cplx* o = &out.values[s * nu];
    auto A = [&](int j, int k) { return up[j].values[s * nu + k]; };
    auto B = [&](int j, int k) { return low[j].values[s * nu + k]; };
    if (d == 1) {
      o[0] = mu[0] + A(0, 1);
      o[1] = B(0, 0) - mu[1];
    } else if (d == 2) {
      o[0] = mu[0] + A(0, 1) - kI * A(1, 1);
      o[1] = B(0, 0) + kI * B(1, 0) - mu[1];
    } else {
      // (A.sigma) acting on components (2,3); (B.sigma) on components (0,1).
      o[0] = mu[0] + A(2, 2) + A(0, 3) - kI * A(1, 3);
      o[1] = mu[1] + A(0, 2) + kI * A(1, 2) - A(2, 3);
      o[2] = B(2, 0) + B(0, 1) - kI * B(1, 1) - mu[2];
      o[3] = B(0, 0) + kI * B(1, 0) - B(2, 1) - mu[3];
    }
  }
  return out;
}

void multiply_in_fourier(const std::function<SymbolMatrix(const Momentum&)>& symbol_fn, LatticeField& f_hat) {
  check_field(f_hat);
  const int nu = f_hat.nu;
  parallel_for(f_hat.sites(), [&](std::size_t b, std::size_t e) {
    std::array<cplx, 4> tmp{};
    for (std::size_t s = b; s < e; ++s) {
      const SymbolMatrix m = symbol_fn(lattice_momentum(f_hat.lattice, s));
      if (m.nu() != nu) throw ArgumentError("symbol size does not match field components");
      apply(m, &f_hat.values[s * nu], tmp.data());
      for (int k = 0; k < nu; ++k) f_hat.values[s * nu + k] = tmp[k];
    }
  });
}

LatticeField apply_symbol_multiplier(const std::function<SymbolMatrix(const Momentum&)>& symbol_fn,
                                     const LatticeField& f) {
  LatticeField g = f;
  to_fourier(g);
  multiply_in_fourier(symbol_fn, g);
  from_fourier(g);
  return g;
}

LatticeField free_resolvent(const ModelId& model, cplx z, const LatticeField& f) {
  model.validate();
  if (!model.discrete()) throw ArgumentError("free_resolvent: model must be discrete");
  if (model.d != f.lattice.d || model.h != f.lattice.h || model.nu() != f.nu)
    throw ArgumentError("free_resolvent: model and lattice do not match");
  return apply_symbol_multiplier(
      [&](const Momentum& xi) {
        try {
          return resolvent_at(discrete_symbol(model, xi), z);
        } catch (const SingularMatrixError&) {
          std::ostringstream os;
          os << "free_resolvent: z is in the spectrum of " << model.label() << " at xi = (";
          for (std::size_t j = 0; j < xi.size(); ++j) os << (j ? ", " : "") << xi[j];
          os << ")";
          throw SingularMatrixError(os.str());
        }
      },
      f);
}

double operator_norm_estimate(const LinearMap& t, int iters, std::uint64_t seed) {
  if (iters < 1) throw ArgumentError("operator_norm_estimate: iters must be >= 1");
  if (!t.apply || !t.adjoint) throw ArgumentError("operator_norm_estimate: map and adjoint required");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> x(t.in_size), y(t.out_size), w(t.in_size);
  for (auto& v : x) v = cplx(nd(rng), nd(rng));
  auto in_norm = [&](const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return std::sqrt(t.in_weight * s);
  };
  auto out_norm2 = [&](const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return t.out_weight * s;
  };
  double nx = in_norm(x);
  if (nx == 0.0) return 0.0;
  for (auto& v : x) v /= nx;
  double rq = 0.0;
  for (int it = 0; it < iters; ++it) {
    y.assign(t.out_size, cplx(0.0));
    t.apply(x, y);
    rq = out_norm2(y);  // <x, T*T x> with ||x|| = 1
    if (rq == 0.0) return 0.0;
    w.assign(t.in_size, cplx(0.0));
    t.adjoint(y, w);
    const double nw = in_norm(w);
    if (nw == 0.0) return 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) x[i] = w[i] / nw;
  }
  y.assign(t.out_size, cplx(0.0));
  t.apply(x, y);
  rq = std::max(rq, out_norm2(y));
  return std::sqrt(rq);
}

void write_snapshot(const std::string& path, const LatticeField& f) {
  check_field(f);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ArgumentError("snapshot: cannot open " + tmp);
    os.write("DLAT1", 5);
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(f.lattice.d));
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(f.lattice.n));
    put_le<double>(os, f.lattice.h);
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(f.nu));
    for (const auto& v : f.values) {
      put_le<double>(os, v.real());
      put_le<double>(os, v.imag());
    }
    if (!os) throw ArgumentError("snapshot: write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

LatticeField read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ArgumentError("snapshot: cannot open " + path);
  char magic[5];
  if (!is.read(magic, 5) || std::memcmp(magic, "DLAT1", 5) != 0) throw ArgumentError("snapshot: bad magic");
  PeriodicLattice lat;
  lat.d = static_cast<int>(get_le<std::uint32_t>(is));
  lat.n = static_cast<int>(get_le<std::uint32_t>(is));
  lat.h = get_le<double>(is);
  const int nu = static_cast<int>(get_le<std::uint32_t>(is));
  LatticeField f(lat, nu);
  for (auto& v : f.values) {
    const double re = get_le<double>(is);
    const double im = get_le<double>(is);
    v = cplx(re, im);
  }
  if (is.peek() != std::char_traits<char>::eof()) throw ArgumentError("snapshot: trailing data");
  return f;
}

}  // namespace dlat
