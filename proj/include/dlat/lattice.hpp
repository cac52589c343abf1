#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dlat/symbols.hpp"

namespace dlat {

/// Periodic mesh hZ^d / (nhZ)^d.
struct PeriodicLattice {
  int d = 1;
  int n = 4;
  double h = 1.0;

  double side() const { return n * h; }
  std::size_t sites() const;
  /// Throws ArgumentError unless d in {1,2,3}, n >= 4 is a power of two and h > 0.
  void validate() const;
  bool operator==(const PeriodicLattice& o) const { return d == o.d && n == o.n && h == o.h; }
};

/// Signed frequency of DFT index q: q for q < n/2, q - n otherwise.
int centered_index(int q, int n);

/// Axis indices of a site (axis 0 slowest).
std::vector<int> site_coords(const PeriodicLattice& lat, std::size_t site);
std::size_t site_index(const PeriodicLattice& lat, const std::vector<int>& coords);

/// Momentum of DFT index `site`: xi_j = 2 pi centered_index(q_j) / (n h).
Momentum lattice_momentum(const PeriodicLattice& lat, std::size_t site);

/// nu-component complex field, stored site-major / component-minor.
struct LatticeField {
  PeriodicLattice lattice;
  int nu = 2;
  std::vector<cplx> values;

  LatticeField() = default;
  LatticeField(const PeriodicLattice& lat, int nu);

  std::size_t sites() const { return lattice.sites(); }
  cplx& at(std::size_t site, int comp) { return values[site * nu + comp]; }
  const cplx& at(std::size_t site, int comp) const { return values[site * nu + comp]; }

  /// h^d sum |u|^2, square-rooted.
  double norm() const;
  /// h^d sum conj(u) w.
  cplx inner(const LatticeField& w) const;
  bool same_shape(const LatticeField& w) const { return lattice == w.lattice && nu == w.nu; }

  LatticeField& operator+=(const LatticeField& w);
  LatticeField& operator-=(const LatticeField& w);
  LatticeField& operator*=(cplx s);
};

LatticeField operator+(LatticeField a, const LatticeField& b);
LatticeField operator-(LatticeField a, const LatticeField& b);
LatticeField operator*(cplx s, LatticeField a);

/// Transform the field in place to / from unitary DFT coefficients.
void to_fourier(LatticeField& f);
void from_fourier(LatticeField& f);

enum class DifferenceOp { forward, backward, symmetric, laplacian };

/// Componentwise stencil along `axis` (0-based, ignored for laplacian):
///   forward   (1/ih)(u(k+e) - u(k))
///   backward  (1/ih)(u(k) - u(k-e))
///   symmetric (1/2ih)(u(k+e) - u(k-e))
///   laplacian (1/h^2) sum_j (2u(k) - u(k+e_j) - u(k-e_j))   (i.e. -Delta_h)
LatticeField apply_difference(DifferenceOp op, int axis, const LatticeField& f);

/// Free discrete Dirac operator assembled from stencils.
LatticeField apply_free_dirac(const ModelId& model, const LatticeField& f);

/// Pointwise multiplication by M(xi) in DFT space.
LatticeField apply_symbol_multiplier(const std::function<SymbolMatrix(const Momentum&)>& symbol_fn,
                                     const LatticeField& f);
/// Same as above on DFT coefficients, in place.
void multiply_in_fourier(const std::function<SymbolMatrix(const Momentum&)>& symbol_fn, LatticeField& f_hat);

/// (H - z)^{-1} f by diagonalisation. Throws SingularMatrixError naming the
/// momentum when z is an eigenvalue of some G(xi).
LatticeField free_resolvent(const ModelId& model, cplx z, const LatticeField& f);

/// Linear map between weighted C^N spaces: <x, y> = weight * sum conj(x) y.
struct LinearMap {
  std::size_t in_size = 0;
  std::size_t out_size = 0;
  double in_weight = 1.0;
  double out_weight = 1.0;
  std::function<void(const std::vector<cplx>&, std::vector<cplx>&)> apply;
  std::function<void(const std::vector<cplx>&, std::vector<cplx>&)> adjoint;
};

/// Power iteration on T*T from a seeded random start; returns the square root
/// of the final Rayleigh quotient (a lower bound for ||T||).
double operator_norm_estimate(const LinearMap& t, int iters, std::uint64_t seed);

/// Field snapshot: "DLAT1", uint32 d, uint32 n, float64 h, uint32 nu, then
/// (re, im) float64 pairs; all little endian.
void write_snapshot(const std::string& path, const LatticeField& f);
LatticeField read_snapshot(const std::string& path);

}  // namespace dlat
