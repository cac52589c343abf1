#include "dlat/krylov.hpp"

#include <cmath>

#include "dlat/errors.hpp"

namespace dlat {

namespace {

double nrm(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return std::sqrt(s);
}

cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double residual(const VectorOp& a, const std::vector<cplx>& b, const std::vector<cplx>& x, std::vector<cplx>& r) {
  std::vector<cplx> ax(b.size());
  a(x, ax);
  r.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = b[i] - ax[i];
  return nrm(r);
}

}  // namespace

SolverReport gmres(const VectorOp& a, const std::vector<cplx>& b, std::vector<cplx>& x, double tol, int max_iter,
                   int restart) {
  if (!(tol > 0.0) || max_iter < 1 || restart < 1) throw ArgumentError("gmres: invalid parameters");
  const std::size_t n = b.size();
  if (x.size() != n) x.assign(n, cplx(0.0));
  SolverReport rep;
  const double bn = nrm(b);
  if (bn == 0.0) {
    x.assign(n, cplx(0.0));
    rep.converged = true;
    return rep;
  }
  std::vector<cplx> r;
  double rn = residual(a, b, x, r);
  while (true) {
    rep.residual = rn / bn;
    if (rn <= tol * bn) {
      rep.converged = true;
      return rep;
    }
    if (rep.iterations >= max_iter) return rep;

    const int m = std::min(restart, max_iter - rep.iterations);
    std::vector<std::vector<cplx>> v(m + 1);
    std::vector<std::vector<cplx>> hm(m + 1, std::vector<cplx>(m, 0.0));
    std::vector<cplx> cs(m), sn(m), g(m + 1, 0.0);
    v[0] = r;
    for (auto& c : v[0]) c /= rn;
    g[0] = rn;
    int k = 0;
    for (; k < m; ++k) {
      std::vector<cplx> w(n);
      a(v[k], w);
      // Modified Gram-Schmidt with one reorthogonalisation pass.
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= k; ++i) {
          const cplx hik = dot(v[i], w);
          hm[i][k] += hik;
          for (std::size_t t = 0; t < n; ++t) w[t] -= hik * v[i][t];
        }
      const double wn = nrm(w);
      hm[k + 1][k] = wn;
      for (int i = 0; i < k; ++i) {
        const cplx t1 = std::conj(cs[i]) * hm[i][k] + std::conj(sn[i]) * hm[i + 1][k];
        const cplx t2 = -sn[i] * hm[i][k] + cs[i] * hm[i + 1][k];
        hm[i][k] = t1;
        hm[i + 1][k] = t2;
      }
      const double den = std::sqrt(std::norm(hm[k][k]) + std::norm(hm[k + 1][k]));
      if (den == 0.0) {
        cs[k] = 1.0;
        sn[k] = 0.0;
      } else {
        cs[k] = hm[k][k] / den;
        sn[k] = hm[k + 1][k] / den;
      }
      hm[k][k] = den;
      hm[k + 1][k] = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = std::conj(cs[k]) * g[k];
      ++rep.iterations;
      if (wn == 0.0 || std::abs(g[k + 1]) <= 0.1 * tol * bn) {
        ++k;
        break;
      }
      v[k + 1] = w;
      for (auto& c : v[k + 1]) c /= wn;
    }
    // Back substitution for the k x k triangular system.
    std::vector<cplx> y(k, 0.0);
    for (int i = k - 1; i >= 0; --i) {
      cplx s = g[i];
      for (int j = i + 1; j < k; ++j) s -= hm[i][j] * y[j];
      y[i] = s / hm[i][i];
    }
    for (int i = 0; i < k; ++i)
      for (std::size_t t = 0; t < n; ++t) x[t] += y[i] * v[i][t];
    const double prev = rn;
    rn = residual(a, b, x, r);
    if (rn >= prev && rep.iterations >= max_iter) {
      rep.residual = rn / bn;
      return rep;
    }
  }
}

SolverReport fixed_point(const VectorOp& a, const std::vector<cplx>& b, std::vector<cplx>& x, double tol,
                         int max_iter) {
  if (!(tol > 0.0) || max_iter < 1) throw ArgumentError("fixed_point: invalid parameters");
  const std::size_t n = b.size();
  if (x.size() != n) x.assign(n, cplx(0.0));
  SolverReport rep;
  const double bn = nrm(b);
  if (bn == 0.0) {
    x.assign(n, cplx(0.0));
    rep.converged = true;
    return rep;
  }
  std::vector<cplx> r;
  for (;;) {
    const double rn = residual(a, b, x, r);
    rep.residual = rn / bn;
    if (rn <= tol * bn) {
      rep.converged = true;
      return rep;
    }
    if (rep.iterations >= max_iter) return rep;
    // x + r = b - (A - I) x
    for (std::size_t i = 0; i < n; ++i) x[i] += r[i];
    ++rep.iterations;
  }
}

}  // namespace dlat
