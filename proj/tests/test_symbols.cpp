#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "dlat/errors.hpp"
#include "dlat/symbols.hpp"

using namespace dlat;

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI{0.0, 1.0};

Eigen::MatrixXcd to_eigen(const SymbolMatrix& m) {
  Eigen::MatrixXcd e(m.nu(), m.nu());
  for (int r = 0; r < m.nu(); ++r)
    for (int c = 0; c < m.nu(); ++c) e(r, c) = m(r, c);
  return e;
}

double eigen_norm(const SymbolMatrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
  return svd.singularValues()(0);
}

// Difference-operator symbols straight from the exponentials.
cplx backward_symbol(double h, double xi) { return (1.0 - std::exp(-kI * h * xi)) / (kI * h); }
cplx forward_symbol(double h, double xi) { return (std::exp(kI * h * xi) - 1.0) / (kI * h); }

}  // namespace

TEST_CASE("pauli matrices square to one and anticommute") {
  const SymbolMatrix one = SymbolMatrix::identity(2);
  for (int j = 1; j <= 3; ++j) {
    CHECK((pauli(j) * pauli(j) - one).max_abs() == doctest::Approx(0.0));
    for (int k = j + 1; k <= 3; ++k) CHECK((pauli(j) * pauli(k) + pauli(k) * pauli(j)).max_abs() == 0.0);
  }
  CHECK((pauli(1) * pauli(2) - kI * pauli(3)).max_abs() == 0.0);
  CHECK_THROWS_AS(pauli(4), ArgumentError);
}

TEST_CASE("model kinds round-trip through their names") {
  for (ModelKind k : {ModelKind::continuous, ModelKind::fb, ModelKind::s, ModelKind::fb_mod, ModelKind::s_mod})
    CHECK(parse_model_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_model_kind("wilson"), ArgumentError);
  CHECK_THROWS_AS((ModelId{ModelKind::fb, 4, 0.0, 1.0}.validate()), ArgumentError);
  CHECK_THROWS_AS((ModelId{ModelKind::fb, 1, -1.0, 1.0}.validate()), ArgumentError);
  CHECK_THROWS_AS((ModelId{ModelKind::fb, 1, 0.0, 0.0}.validate()), ArgumentError);
}

TEST_CASE("1D forward-backward symbol matches the difference-operator exponentials") {
  const double h = 0.3, m = 0.7;
  for (double xi : {-9.0, -1.3, 0.0, 0.4, 2.2, 10.0}) {
    const SymbolMatrix g = discrete_symbol(ModelId{ModelKind::fb, 1, m, h}, {xi});
    CHECK(std::abs(g(0, 1) - backward_symbol(h, xi)) < 1e-14);
    CHECK(std::abs(g(1, 0) - forward_symbol(h, xi)) < 1e-14);
    CHECK(g(0, 0).real() == doctest::Approx(m));
    const SymbolMatrix s = discrete_symbol(ModelId{ModelKind::s, 1, m, h}, {xi});
    CHECK(std::abs(s(0, 1) - 0.5 * (backward_symbol(h, xi) + forward_symbol(h, xi))) < 1e-14);
    // Wilson term: m + (4/h) sin^2(h xi / 2) on the diagonal.
    const SymbolMatrix w = discrete_symbol(ModelId{ModelKind::s_mod, 1, m, h}, {xi});
    CHECK(w(0, 0).real() == doctest::Approx(m + 4.0 / h * std::pow(std::sin(h * xi / 2), 2)));
  }
}

TEST_CASE("symbols are Hermitian and 2 pi / h periodic") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int d = 1; d <= 3; ++d)
    for (ModelKind k : {ModelKind::fb, ModelKind::s, ModelKind::fb_mod, ModelKind::s_mod}) {
      const ModelId model{k, d, 0.5, 0.25};
      for (int t = 0; t < 50; ++t) {
        Momentum xi(d), xi2(d);
        for (int a = 0; a < d; ++a) {
          xi[a] = u(rng);
          xi2[a] = xi[a] + (a == 0 ? 2 * kPi / model.h : 0.0);
        }
        const SymbolMatrix g = discrete_symbol(model, xi);
        CHECK((g - g.adjoint()).max_abs() < 1e-14);
        CHECK((g - discrete_symbol(model, xi2)).max_abs() < 1e-12);
      }
    }
}

TEST_CASE("scalar squares hold and the 3D forward-backward square is rejected") {
  const ModelId s3{ModelKind::s_mod, 3, 1.0, 0.1};
  const Momentum xi{1.0, -2.0, 3.0};
  const SymbolMatrix g = discrete_symbol(s3, xi);
  CHECK((g * g - scalar_g(s3, xi) * SymbolMatrix::identity(4)).max_abs() < 1e-11);
  CHECK_THROWS_AS(scalar_g(ModelId{ModelKind::fb, 3, 0.0, 0.1}, xi), UnsupportedModelError);
  CHECK_THROWS_AS(scalar_g(ModelId{ModelKind::fb_mod, 3, 0.0, 0.1}, xi), UnsupportedModelError);
  const ModelId c2{ModelKind::continuous, 2, 2.0, 1.0};
  CHECK(scalar_g(c2, {3.0, 4.0}) == doctest::Approx(29.0));
}

TEST_CASE("matrix norm agrees with an SVD oracle") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 200; ++t) {
    const int nu = t % 2 ? 4 : 2;
    SymbolMatrix m(nu);
    for (int r = 0; r < nu; ++r)
      for (int c = 0; c < nu; ++c) m(r, c) = cplx(nd(rng), nd(rng));
    CHECK(matrix_norm(m) == doctest::Approx(eigen_norm(m)).epsilon(1e-12));
  }
  CHECK(matrix_norm(SymbolMatrix(2)) == 0.0);
}

TEST_CASE("Hermitian eigenvalues agree with a self-adjoint eigensolver oracle") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 100; ++t) {
    SymbolMatrix m(4);
    for (int r = 0; r < 4; ++r) {
      m(r, r) = nd(rng);
      for (int c = r + 1; c < 4; ++c) {
        m(r, c) = cplx(nd(rng), nd(rng));
        m(c, r) = std::conj(m(r, c));
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(m));
    const auto ev = hermitian_eigenvalues(m);
    for (int i = 0; i < 4; ++i) CHECK(ev[i] == doctest::Approx(es.eigenvalues()(i)).epsilon(1e-12));
  }
}

TEST_CASE("squared-symbol eigenvalues of the 3D forward-backward symbol match the oracle") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int t = 0; t < 100; ++t) {
    const ModelId model{t % 2 ? ModelKind::fb : ModelKind::fb_mod, 3, 0.3 * (t % 3), 0.5};
    const Momentum xi{u(rng) / model.h, u(rng) / model.h, u(rng) / model.h};
    const Eigen::MatrixXcd g = to_eigen(discrete_symbol(model, xi));
    const Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(4, 4) + g * g;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
    const SquaredSymbolEigs se = squared_symbol_eigs(model, xi);
    CHECK(se.lambda_min == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-11));
    CHECK(se.lambda_max == doctest::Approx(es.eigenvalues()(3)).epsilon(1e-11));
  }
}

TEST_CASE("resolvent agrees with a dense inverse and detects the spectrum") {
  const cplx z{0.3, 0.8};
  for (const ModelId& model : {ModelId{ModelKind::s, 2, 0.5, 0.2}, ModelId{ModelKind::fb_mod, 3, 1.0, 0.2},
                               ModelId{ModelKind::fb, 3, 0.0, 0.5}}) {
    Momentum xi(model.d, 1.1);
    xi[0] = -2.3;
    const SymbolMatrix g = discrete_symbol(model, xi);
    const Eigen::MatrixXcd inv = (to_eigen(g) - z * Eigen::MatrixXcd::Identity(g.nu(), g.nu())).inverse();
    const Eigen::MatrixXcd got = to_eigen(resolvent_at(g, z));
    CHECK((got - inv).cwiseAbs().maxCoeff() < 1e-12);
  }
  // z = m is an eigenvalue of the continuum symbol at xi = 0.
  const SymbolMatrix g0 = continuous_symbol(ModelId{ModelKind::continuous, 1, 1.0, 1.0}, {0.0});
  CHECK_THROWS_AS(resolvent_at(g0, 1.0), SingularMatrixError);
  const SymbolMatrix g3 = discrete_symbol(ModelId{ModelKind::fb, 3, 0.0, 1.0}, {0.0, 0.0, 0.0});
  CHECK_THROWS_AS(resolvent_at(g3, 0.0), SingularMatrixError);
}

TEST_CASE("norm identities for Hermitian symbols") {
  const ModelId model{ModelKind::fb_mod, 3, 0.4, 0.3};
  const SymbolMatrix g = discrete_symbol(model, {2.0, -1.0, 4.0});
  const SymbolMatrix one = SymbolMatrix::identity(4);
  CHECK(matrix_norm(g - kI * one) == doctest::Approx(std::sqrt(matrix_norm(g * g + one))).epsilon(1e-12));
  CHECK(matrix_norm(resolvent_at(g, kI)) ==
        doctest::Approx(std::sqrt(matrix_norm(resolvent_at(g * g + one, 0.0)))).epsilon(1e-12));
}

TEST_CASE("f_mod is h times the symbol of minus the discrete Laplacian") {
  const double h = 0.25;
  const Momentum xi{1.0, 2.0};
  double lap = 0.0;
  for (double x : xi) lap += (2.0 - 2.0 * std::cos(h * x)) / (h * h);
  CHECK(f_mod(2, h, xi) == doctest::Approx(h * lap));
}
