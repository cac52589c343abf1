#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "dlat/errors.hpp"
#include "dlat/fft.hpp"
#include "dlat/lattice.hpp"

using namespace dlat;

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI{0.0, 1.0};

LatticeField random_field(const PeriodicLattice& lat, int nu, std::uint64_t seed) {
  LatticeField f(lat, nu);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  for (auto& v : f.values) v = cplx(nd(rng), nd(rng));
  return f;
}

double max_diff(const LatticeField& a, const LatticeField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

}  // namespace

TEST_CASE("lattice validation and index helpers") {
  CHECK_NOTHROW((PeriodicLattice{2, 8, 0.5}.validate()));
  CHECK_THROWS_AS((PeriodicLattice{2, 6, 0.5}.validate()), ArgumentError);
  CHECK_THROWS_AS((PeriodicLattice{4, 8, 0.5}.validate()), ArgumentError);
  CHECK_THROWS_AS((PeriodicLattice{1, 2, 0.5}.validate()), ArgumentError);
  CHECK_THROWS_AS((PeriodicLattice{1, 8, -1.0}.validate()), ArgumentError);
  CHECK(centered_index(3, 8) == 3);
  CHECK(centered_index(4, 8) == -4);
  CHECK(centered_index(7, 8) == -1);
  const PeriodicLattice lat{3, 4, 0.25};
  CHECK(lat.sites() == 64);
  for (std::size_t s = 0; s < lat.sites(); ++s) CHECK(site_index(lat, site_coords(lat, s)) == s);
  CHECK(site_coords(lat, 1)[2] == 1);
  const Momentum xi = lattice_momentum(PeriodicLattice{1, 8, 0.5}, 7);
  CHECK(xi[0] == doctest::Approx(-2 * kPi / 4.0));
}

TEST_CASE("FFT matches a naive unitary DFT") {
  for (int d = 1; d <= 2; ++d) {
    const PeriodicLattice lat{d, 8, 1.0};
    const LatticeField f = random_field(lat, 2, 11 + d);
    LatticeField g = f;
    fft_forward(d, lat.n, 2, g.values.data());
    const double norm = 1.0 / std::sqrt(static_cast<double>(lat.sites()));
    for (std::size_t q = 0; q < lat.sites(); ++q) {
      const auto qc = site_coords(lat, q);
      for (int c = 0; c < 2; ++c) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < lat.sites(); ++k) {
          const auto kc = site_coords(lat, k);
          double phase = 0.0;
          for (int a = 0; a < d; ++a) phase += kc[a] * qc[a];
          acc += f.at(k, c) * std::polar(1.0, -2 * kPi * phase / lat.n);
        }
        CHECK(std::abs(acc * norm - g.at(q, c)) < 1e-12);
      }
    }
    fft_inverse(d, lat.n, 2, g.values.data());
    CHECK(max_diff(f, g) < 1e-13);
  }
}

TEST_CASE("Fourier transform preserves the weighted norm") {
  const PeriodicLattice lat{3, 8, 0.5};
  LatticeField f = random_field(lat, 4, 5);
  const double before = f.norm();
  to_fourier(f);
  CHECK(f.norm() == doctest::Approx(before).epsilon(1e-13));
  LatticeField one(PeriodicLattice{2, 8, 0.25}, 2);
  for (std::size_t s = 0; s < one.sites(); ++s) one.at(s, 0) = 1.0;
  CHECK(one.norm() == doctest::Approx(2.0));
}

TEST_CASE("stencils act on plane waves by their symbols") {
  const PeriodicLattice lat{2, 16, 0.2};
  const int q0 = 3, q1 = 14;
  LatticeField f(lat, 2);
  const double xi0 = 2 * kPi * centered_index(q0, 16) / lat.side(), xi1 = 2 * kPi * centered_index(q1, 16) / lat.side();
  for (std::size_t s = 0; s < lat.sites(); ++s) {
    const auto c = site_coords(lat, s);
    f.at(s, 0) = std::polar(1.0, lat.h * (xi0 * c[0] + xi1 * c[1]));
  }
  const double h = lat.h;
  const cplx fw = (std::exp(kI * h * xi1) - 1.0) / (kI * h);
  const cplx bw = (1.0 - std::exp(-kI * h * xi1)) / (kI * h);
  const double lap = (2 - 2 * std::cos(h * xi0)) / (h * h) + (2 - 2 * std::cos(h * xi1)) / (h * h);
  const LatticeField a = apply_difference(DifferenceOp::forward, 1, f);
  const LatticeField b = apply_difference(DifferenceOp::backward, 1, f);
  const LatticeField s = apply_difference(DifferenceOp::symmetric, 1, f);
  const LatticeField l = apply_difference(DifferenceOp::laplacian, 0, f);
  for (std::size_t k = 0; k < lat.sites(); ++k) {
    CHECK(std::abs(a.at(k, 0) - fw * f.at(k, 0)) < 1e-12);
    CHECK(std::abs(b.at(k, 0) - bw * f.at(k, 0)) < 1e-12);
    CHECK(std::abs(s.at(k, 0) - std::sin(h * xi1) / h * f.at(k, 0)) < 1e-12);
    CHECK(std::abs(l.at(k, 0) - lap * f.at(k, 0)) < 1e-10);
  }
}

TEST_CASE("stencil operators equal their Fourier multipliers") {
  for (int d = 1; d <= 3; ++d)
    for (ModelKind k : {ModelKind::fb, ModelKind::s, ModelKind::fb_mod, ModelKind::s_mod}) {
      const PeriodicLattice lat{d, d == 3 ? 4 : 8, 0.3};
      const ModelId model{k, d, 0.7, lat.h};
      const LatticeField f = random_field(lat, model.nu(), 17);
      const LatticeField a = apply_free_dirac(model, f);
      const LatticeField b = apply_symbol_multiplier([&](const Momentum& xi) { return discrete_symbol(model, xi); }, f);
      CHECK(max_diff(a, b) < 1e-11);
    }
}

TEST_CASE("forward and backward differences are adjoint; the free operator is self-adjoint") {
  const PeriodicLattice lat{2, 8, 0.25};
  const LatticeField u = random_field(lat, 2, 1), w = random_field(lat, 2, 2);
  for (int axis = 0; axis < 2; ++axis) {
    const cplx lhs = apply_difference(DifferenceOp::forward, axis, u).inner(w);
    const cplx rhs = u.inner(apply_difference(DifferenceOp::backward, axis, w));
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs) + 1e-12);
  }
  for (ModelKind k : {ModelKind::fb, ModelKind::s_mod}) {
    const ModelId model{k, 2, 0.5, lat.h};
    const cplx lhs = apply_free_dirac(model, u).inner(w), rhs = u.inner(apply_free_dirac(model, w));
    CHECK(std::abs(lhs - rhs) < 1e-11 * std::abs(lhs));
  }
}

TEST_CASE("free resolvent solves (H - z) u = f and rejects spectral points") {
  const cplx z{0.4, 1.0};
  for (int d = 1; d <= 3; ++d) {
    const PeriodicLattice lat{d, d == 3 ? 4 : 16, 0.25};
    const ModelId model{d == 3 ? ModelKind::fb : ModelKind::s_mod, d, 0.3, lat.h};
    const LatticeField f = random_field(lat, model.nu(), 3);
    const LatticeField u = free_resolvent(model, z, f);
    LatticeField r = apply_free_dirac(model, u);
    r -= z * u;
    r -= f;
    CHECK(r.norm() / f.norm() < 1e-12);
  }
  const PeriodicLattice lat{1, 8, 0.5};
  CHECK_THROWS_AS(free_resolvent(ModelId{ModelKind::s, 1, 0.0, 0.5}, 0.0, random_field(lat, 2, 4)),
                  SingularMatrixError);
}

TEST_CASE("free resolvent agrees with a dense solve in 1D") {
  const PeriodicLattice lat{1, 8, 0.5};
  const ModelId model{ModelKind::fb, 1, 0.5, lat.h};
  const cplx z{0.1, 0.7};
  const int n = 8, dim = 2 * n;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < n; ++k) {
    const int kp = (k + 1) % n, km = (k + n - 1) % n;
    a(2 * k, 2 * k) = model.m;
    a(2 * k + 1, 2 * k + 1) = -model.m;
    // Upper component couples to D^- of the lower one, lower to D^+ of the upper.
    a(2 * k, 2 * k + 1) += 1.0 / (kI * lat.h);
    a(2 * k, 2 * km + 1) -= 1.0 / (kI * lat.h);
    a(2 * k + 1, 2 * kp) += 1.0 / (kI * lat.h);
    a(2 * k + 1, 2 * k) -= 1.0 / (kI * lat.h);
  }
  const LatticeField f = random_field(lat, 2, 9);
  Eigen::VectorXcd b(dim);
  for (int i = 0; i < dim; ++i) b(i) = f.values[i];
  const Eigen::VectorXcd x = (a - z * Eigen::MatrixXcd::Identity(dim, dim)).partialPivLu().solve(b);
  const LatticeField u = free_resolvent(model, z, f);
  for (int i = 0; i < dim; ++i) CHECK(std::abs(u.values[i] - x(i)) < 1e-12);
}

TEST_CASE("power iteration recovers the norm of a diagonal map") {
  const std::vector<double> diag{0.5, 3.0, 1.0, 2.0};
  LinearMap t;
  t.in_size = t.out_size = diag.size();
  t.apply = [&](const std::vector<cplx>& x, std::vector<cplx>& y) {
    y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = diag[i] * x[i];
  };
  t.adjoint = t.apply;
  const double est = operator_norm_estimate(t, 60, 1);
  CHECK(est <= 3.0 + 1e-12);
  CHECK(est == doctest::Approx(3.0).epsilon(1e-6));
  t.in_weight = 4.0;
  t.out_weight = 1.0;
  CHECK(operator_norm_estimate(t, 60, 1) == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("snapshots round-trip and reject corrupt files") {
  const auto dir = std::filesystem::temp_directory_path() / "dlat_snapshot_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "f.bin").string();
  const LatticeField f = random_field(PeriodicLattice{2, 8, 0.125}, 2, 21);
  write_snapshot(path, f);
  const LatticeField g = read_snapshot(path);
  CHECK(g.same_shape(f));
  CHECK(g.values == f.values);
  std::filesystem::resize_file(path, 30);
  CHECK_THROWS(read_snapshot(path));
  {
    std::ofstream bad(path, std::ios::binary);
    bad << "NOTAFIELD";
  }
  CHECK_THROWS(read_snapshot(path));
  CHECK_THROWS(read_snapshot((dir / "missing.bin").string()));
  std::filesystem::remove_all(dir);
}
