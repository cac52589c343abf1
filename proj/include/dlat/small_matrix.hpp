#pragma once

#include <array>
#include <complex>
#include <initializer_list>

namespace dlat {

using cplx = std::complex<double>;

/// Dense complex matrix of size nu x nu with nu <= 4.
///
/// Holds the value of a Dirac symbol at one momentum. Storage is a fixed
/// 4x4 array so the type stays trivially copyable and allocation free.
class SymbolMatrix {
 public:
  static constexpr int kMaxDim = 4;

  SymbolMatrix() = default;
  explicit SymbolMatrix(int nu);

  static SymbolMatrix identity(int nu);
  static SymbolMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);

  int nu() const { return nu_; }

  cplx& operator()(int r, int c) { return a_[r * kMaxDim + c]; }
  const cplx& operator()(int r, int c) const { return a_[r * kMaxDim + c]; }

  SymbolMatrix adjoint() const;
  cplx trace() const;
  /// Largest entry modulus.
  double max_abs() const;
  double frobenius() const;

  SymbolMatrix& operator+=(const SymbolMatrix& o);
  SymbolMatrix& operator-=(const SymbolMatrix& o);
  SymbolMatrix& operator*=(cplx s);

 private:
  int nu_ = 0;
  std::array<cplx, kMaxDim * kMaxDim> a_{};
};

SymbolMatrix operator+(SymbolMatrix a, const SymbolMatrix& b);
SymbolMatrix operator-(SymbolMatrix a, const SymbolMatrix& b);
SymbolMatrix operator*(const SymbolMatrix& a, const SymbolMatrix& b);
SymbolMatrix operator*(cplx s, SymbolMatrix a);
SymbolMatrix operator*(SymbolMatrix a, cplx s);

/// y = M x for a spinor x of length M.nu().
void apply(const SymbolMatrix& m, const cplx* x, cplx* y);

/// Eigenvalues of a Hermitian matrix, ascending. Cyclic complex Jacobi;
/// only the Hermitian part of the input is used. Entries past nu() are 0.
std::array<double, SymbolMatrix::kMaxDim> hermitian_eigenvalues(const SymbolMatrix& m);

}  // namespace dlat
