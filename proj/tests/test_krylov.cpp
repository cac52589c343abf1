#include <doctest.h>

#include <Eigen/Dense>

#include <random>

#include "dlat/krylov.hpp"

using namespace dlat;

namespace {

Eigen::MatrixXcd random_matrix(int n, double shift, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = cplx(nd(rng), nd(rng)) / std::sqrt(double(n));
  return a + shift * Eigen::MatrixXcd::Identity(n, n);
}

VectorOp as_op(const Eigen::MatrixXcd& a) {
  return [a](const std::vector<cplx>& x, std::vector<cplx>& y) {
    const Eigen::VectorXcd v = a * Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
    y.assign(v.data(), v.data() + v.size());
  };
}

std::vector<cplx> random_rhs(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> b(n);
  for (auto& v : b) v = cplx(nd(rng), nd(rng));
  return b;
}

}  // namespace

TEST_CASE("restarted GMRES matches a dense LU solve") {
  const int n = 60;
  const Eigen::MatrixXcd a = random_matrix(n, 3.0, 1);
  const auto b = random_rhs(n, 2);
  std::vector<cplx> x(n, 0.0);
  const SolverReport rep = gmres(as_op(a), b, x, 1e-12, 400, 20);
  CHECK(rep.converged);
  CHECK(rep.residual <= 1e-12);
  const Eigen::VectorXcd ref = a.partialPivLu().solve(Eigen::Map<const Eigen::VectorXcd>(b.data(), n));
  for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - ref(i)) < 1e-10);
}

TEST_CASE("GMRES reports non-convergence honestly") {
  const int n = 40;
  const Eigen::MatrixXcd a = random_matrix(n, 0.0, 3);
  const auto b = random_rhs(n, 4);
  std::vector<cplx> x(n, 0.0);
  const SolverReport rep = gmres(as_op(a), b, x, 1e-14, 3, 3);
  CHECK_FALSE(rep.converged);
  CHECK(rep.iterations == 3);
  CHECK(rep.residual > 1e-14);
}

TEST_CASE("GMRES with a zero right-hand side returns zero") {
  std::vector<cplx> x(5, 1.0);
  const SolverReport rep = gmres(as_op(random_matrix(5, 2.0, 5)), std::vector<cplx>(5, 0.0), x, 1e-12, 10, 5);
  CHECK(rep.converged);
  for (const auto& v : x) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("fixed-point iteration solves a contraction") {
  const int n = 30;
  const Eigen::MatrixXcd k = 0.3 * random_matrix(n, 0.0, 6) / 3.0;
  const Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n, n) + k;
  const auto b = random_rhs(n, 7);
  std::vector<cplx> x(n, 0.0);
  const SolverReport rep = fixed_point(as_op(a), b, x, 1e-12, 500);
  CHECK(rep.converged);
  const Eigen::VectorXcd ref = a.partialPivLu().solve(Eigen::Map<const Eigen::VectorXcd>(b.data(), n));
  for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - ref(i)) < 1e-10);
}
