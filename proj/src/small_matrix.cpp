#include "dlat/small_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "dlat/errors.hpp"

namespace dlat {

SymbolMatrix::SymbolMatrix(int nu) : nu_(nu) {
  if (nu < 1 || nu > kMaxDim) throw ArgumentError("SymbolMatrix: nu must be in [1,4]");
}

SymbolMatrix SymbolMatrix::identity(int nu) {
  SymbolMatrix m(nu);
  for (int i = 0; i < nu; ++i) m(i, i) = 1.0;
  return m;
}

SymbolMatrix SymbolMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
  SymbolMatrix m(static_cast<int>(rows.size()));
  int r = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != m.nu_) throw ArgumentError("SymbolMatrix: ragged rows");
    int c = 0;
    for (const auto& v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

SymbolMatrix SymbolMatrix::adjoint() const {
  SymbolMatrix t(nu_);
  for (int r = 0; r < nu_; ++r)
    for (int c = 0; c < nu_; ++c) t(c, r) = std::conj((*this)(r, c));
  return t;
}

cplx SymbolMatrix::trace() const {
  cplx s = 0.0;
  for (int i = 0; i < nu_; ++i) s += (*this)(i, i);
  return s;
}

double SymbolMatrix::max_abs() const {
  double m = 0.0;
  for (int r = 0; r < nu_; ++r)
    for (int c = 0; c < nu_; ++c) m = std::max(m, std::abs((*this)(r, c)));
  return m;
}

double SymbolMatrix::frobenius() const {
  double s = 0.0;
  for (int r = 0; r < nu_; ++r)
    for (int c = 0; c < nu_; ++c) s += std::norm((*this)(r, c));
  return std::sqrt(s);
}

SymbolMatrix& SymbolMatrix::operator+=(const SymbolMatrix& o) {
  for (int r = 0; r < nu_; ++r)
    for (int c = 0; c < nu_; ++c) (*this)(r, c) += o(r, c);
  return *this;
}

SymbolMatrix& SymbolMatrix::operator-=(const SymbolMatrix& o) {
  for (int r = 0; r < nu_; ++r)
    for (int c = 0; c < nu_; ++c) (*this)(r, c) -= o(r, c);
  return *this;
}

SymbolMatrix& SymbolMatrix::operator*=(cplx s) {
  for (int r = 0; r < nu_; ++r)
    for (int c = 0; c < nu_; ++c) (*this)(r, c) *= s;
  return *this;
}

SymbolMatrix operator+(SymbolMatrix a, const SymbolMatrix& b) { return a += b; }
SymbolMatrix operator-(SymbolMatrix a, const SymbolMatrix& b) { return a -= b; }
SymbolMatrix operator*(cplx s, SymbolMatrix a) { return a *= s; }
SymbolMatrix operator*(SymbolMatrix a, cplx s) { return a *= s; }

SymbolMatrix operator*(const SymbolMatrix& a, const SymbolMatrix& b) {
  const int n = a.nu();
  SymbolMatrix p(n);
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < n; ++k) {
      const cplx ark = a(r, k);
      if (ark == 0.0) continue;
      for (int c = 0; c < n; ++c) p(r, c) += ark * b(k, c);
    }
  return p;
}

void apply(const SymbolMatrix& m, const cplx* x, cplx* y) {
  const int n = m.nu();
  for (int r = 0; r < n; ++r) {
    cplx s = 0.0;
    for (int c = 0; c < n; ++c) s += m(r, c) * x[c];
    y[r] = s;
  }
}

std::array<double, SymbolMatrix::kMaxDim> hermitian_eigenvalues(const SymbolMatrix& m) {
  const int n = m.nu();
  // Work on the Hermitian part so tiny asymmetries from round-off do not leak.
  std::array<std::array<cplx, 4>, 4> a{};
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a[r][c] = 0.5 * (m(r, c) + std::conj(m(c, r)));
  for (int i = 0; i < n; ++i) a[i][i] = a[i][i].real();

  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (int r = 0; r < n; ++r) {
      diag += std::norm(a[r][r]);
      for (int c = r + 1; c < n; ++c) off += std::norm(a[r][c]);
    }
    if (off <= 1e-34 * diag || off == 0.0) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double mag = std::abs(a[p][q]);
        if (mag == 0.0) continue;
        // Phase D = diag(.., e^{-i phi} at q) makes the (p,q) entry real, then
        // a real symmetric rotation annihilates it.
        const cplx phase = a[p][q] / mag;  // e^{i phi}
        const double app = a[p][p].real(), aqq = a[q][q].real();
        const double theta = (aqq - app) / (2.0 * mag);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const cplx em = std::conj(phase);  // e^{-i phi}

        // A <- A U with U_pp = c, U_pq = s, U_qp = -s e^{-i phi}, U_qq = c e^{-i phi}.
        for (int k = 0; k < n; ++k) {
          const cplx akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * em * akq;
          a[k][q] = s * akp + c * em * akq;
        }
        // A <- U^H A.
        for (int k = 0; k < n; ++k) {
          const cplx apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * phase * aqk;
          a[q][k] = s * apk + c * phase * aqk;
        }
        a[p][q] = 0.0;
        a[q][p] = 0.0;
        a[p][p] = a[p][p].real();
        a[q][q] = a[q][q].real();
      }
    }
  }

  std::array<double, SymbolMatrix::kMaxDim> ev{};
  for (int i = 0; i < n; ++i) ev[i] = a[i][i].real();
  std::sort(ev.begin(), ev.begin() + n);
  return ev;
}

}  // namespace dlat
