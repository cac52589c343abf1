#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "dlat/errors.hpp"
#include "dlat/potential.hpp"

using namespace dlat;

namespace {

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

LatticeField apply_h(const ModelId& model, const SampledPotential& v, const LatticeField& u) {
  return apply_free_dirac(model, u) + apply_potential(v, u);
}

}  // namespace

TEST_CASE("Hoelder exponent of the combined rate") {
  for (int d = 1; d <= 3; ++d) CHECK(theta_prime(1.0, d + 1.0, d) == doctest::Approx(0.5));
  CHECK(theta_prime(0.5, 1.5, 1) == doctest::Approx(0.25));
  CHECK(theta_prime(0.7, std::numeric_limits<double>::infinity(), 2) == doctest::Approx(0.7));
  CHECK(theta_prime(1.0, 1e9, 3) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(theta_prime(1.0, 2.0, 2), ArgumentError);
  CHECK_THROWS_AS(theta_prime(1.0, 1.5, 2), ArgumentError);
  CHECK_THROWS_AS(theta_prime(0.0, 3.0, 1), ArgumentError);
  CHECK_THROWS_AS(theta_prime(1.5, 3.0, 1), ArgumentError);
}

TEST_CASE("fitted decay exponent of the smooth generator exceeds the dimension") {
  const double tau = measure_tau(build_pair(PairKind::smooth_biorthogonal, 1), 8.0);
  CHECK(tau > 3.0);
  CHECK(theta_prime(1.0, tau, 1) > 0.5);
  CHECK_THROWS_AS(measure_tau(build_pair(PairKind::smooth_biorthogonal, 1), 1.0), ArgumentError);
}

TEST_CASE("potentials are Hermitian, bounded and Hoelder") {
  const double box = 4.0;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, box);
  for (const HolderPotential& v : {tanh_potential(2, 0.5, pauli(1), box), cusp_potential(2, 0.5, 0.5, pauli(3), box)}) {
    for (int t = 0; t < 500; ++t) {
      const std::vector<double> x{u(rng), u(rng)}, y{u(rng), u(rng)};
      const SymbolMatrix vx = v.eval(x), vy = v.eval(y);
      CHECK((vx - vx.adjoint()).max_abs() < 1e-15);
      CHECK(matrix_norm(vx) <= v.sup_bound + 1e-12);
      double dist2 = 0.0;
      for (int a = 0; a < 2; ++a) {
        const double dx = std::abs(x[a] - y[a]);
        dist2 += std::pow(std::min(dx, box - dx), 2);
      }
      CHECK(matrix_norm(vx - vy) <= v.holder_const * std::pow(std::sqrt(dist2), v.theta) + 1e-12);
    }
  }
  const HolderPotential tanh1 = tanh_potential(1, 0.5, pauli(1), box);
  CHECK(matrix_norm(tanh1.eval({box / 2})) < 1e-15);
  CHECK(tanh1.eval({box / 2 + 0.01})(0, 1).real() == doctest::Approx(0.5 * std::tanh(0.01)).epsilon(1e-6));
  CHECK(zero_potential(3).constant);
}

TEST_CASE("sampling and applying a potential") {
  const PeriodicLattice lat{1, 8, 0.5};
  const HolderPotential v = tanh_potential(1, 0.5, pauli(1), lat.side());
  const SampledPotential s = sample_potential(v, lat);
  REQUIRE(s.values.size() == lat.sites());
  CHECK((s.values[3] - v.eval({1.5})).max_abs() == 0.0);
  const LatticeField f = random_field(lat, 2, 1);
  const LatticeField g = apply_potential(s, f);
  for (std::size_t k = 0; k < lat.sites(); ++k) {
    cplx out[2];
    apply(s.values[k], &f.at(k, 0), out);
    CHECK(std::abs(g.at(k, 0) - out[0]) == 0.0);
    CHECK(std::abs(g.at(k, 1) - out[1]) == 0.0);
  }
  CHECK_THROWS_AS(sample_potential(v, PeriodicLattice{2, 8, 0.5}), ArgumentError);
}

TEST_CASE("perturbed resolvent: V = 0 reduces to the free resolvent") {
  const PeriodicLattice lat{2, 16, 0.25};
  const ModelId model{ModelKind::s_mod, 2, 0.5, lat.h};
  const LatticeField f = random_field(lat, 2, 2);
  const auto [u, rep] = perturbed_resolvent(model, sample_potential(zero_potential(2), lat), cplx(0, 2), f);
  CHECK(rep.converged);
  CHECK(max_diff(u, free_resolvent(model, cplx(0, 2), f)) < 1e-12);
}

TEST_CASE("perturbed resolvent: residual, fixed point vs GMRES, constant mass shift") {
  const PeriodicLattice lat{1, 64, 1.0 / 16};
  const ModelId model{ModelKind::fb, 1, 0.0, lat.h};
  const SampledPotential v = sample_potential(tanh_potential(1, 0.5, pauli(1), lat.side()), lat);
  const LatticeField f = random_field(lat, 2, 3);
  const cplx z{0.0, 2.0};
  const auto [ug, rg] = perturbed_resolvent(model, v, z, f);
  CHECK(rg.converged);
  LatticeField r = apply_h(model, v, ug);
  r -= z * ug;
  r -= f;
  CHECK(r.norm() / f.norm() < 1e-9);
  SolverOptions fp;
  fp.fixed_point = true;
  fp.max_iter = 2000;
  const auto [uf, rf] = perturbed_resolvent(model, v, z, f, fp);
  CHECK(rf.converged);
  CHECK(max_diff(ug, uf) < 1e-8);

  const SampledPotential c = sample_potential(constant_potential(1, 0.5 * pauli(3)), lat);
  const auto [uc, rc] = perturbed_resolvent(model, c, z, f);
  CHECK(max_diff(uc, free_resolvent(ModelId{ModelKind::fb, 1, 0.5, lat.h}, z, f)) < 1e-9);
}

TEST_CASE("the perturbed operator is self-adjoint and its resolvent satisfies R(z)* = R(conj z)") {
  const PeriodicLattice lat{2, 8, 0.5};
  const ModelId model{ModelKind::fb_mod, 2, 0.3, lat.h};
  const SampledPotential v = sample_potential(cusp_potential(2, 0.7, 0.5, pauli(1), lat.side()), lat);
  const LatticeField a = random_field(lat, 2, 4), b = random_field(lat, 2, 5);
  const cplx lhs = apply_h(model, v, a).inner(b), rhs = a.inner(apply_h(model, v, b));
  CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));
  const cplx z{0.2, 1.5};
  const auto ra = perturbed_resolvent(model, v, z, a).first;
  const auto rb = perturbed_resolvent(model, v, std::conj(z), b).first;
  CHECK(std::abs(ra.inner(b) - a.inner(rb)) < 1e-9 * std::abs(ra.inner(b)));
}

TEST_CASE("continuum perturbed resolvent solves its equation") {
  const PeriodicLattice fine{1, 128, 4.0 / 128};
  const ModelId c{ModelKind::continuous, 1, 0.0, 1.0};
  const SampledPotential v = sample_potential(tanh_potential(1, 0.5, pauli(1), 4.0), fine);
  const FineGridFunction f = make_probe(ProbeKind::gaussian, fine, 0.25, 2, 1);
  const auto [u, rep] = continuum_perturbed_resolvent(c, v, cplx(0, 2), f);
  CHECK(rep.converged);
  FineGridFunction r = continuum_apply(c, u) + apply_potential(v, u);
  r -= cplx(0, 2) * u;
  r -= f;
  CHECK(r.norm() < 1e-9);
  CHECK_THROWS_AS(continuum_perturbed_resolvent(ModelId{ModelKind::fb, 1, 0.0, 1.0}, v, cplx(0, 2), f), ArgumentError);
}

TEST_CASE("commutator gap: zero for constant potentials, rejected for the sinc pair") {
  const PeriodicLattice fine{1, 128, 4.0 / 128};
  const std::vector<FineGridFunction> probes{make_probe(ProbeKind::gaussian, fine, 0.25, 2, 1),
                                             make_probe(ProbeKind::edge_packet, fine, 0.25, 2, 1)};
  const RieszPair smooth = build_pair(PairKind::smooth_biorthogonal, 1);
  CHECK(commutator_gap(smooth, constant_potential(1, 0.5 * pauli(3)), 0.25, probes) < 1e-12);
  const double g1 = commutator_gap(smooth, tanh_potential(1, 0.5, pauli(1), 4.0), 0.25, probes);
  CHECK(g1 > 0.0);
  CHECK_THROWS_AS(commutator_gap(build_pair(PairKind::orthonormal_sinc, 1), zero_potential(1), 0.25, probes),
                  ArgumentError);
  CHECK_THROWS_AS(commutator_gap(smooth, zero_potential(1), 0.25, {}), ArgumentError);
}

TEST_CASE("perturbed sweep converges for a Lipschitz kink") {
  PerturbedSweepConfig cfg;
  cfg.h_list = {0.25, 0.125, 0.0625};
  cfg.probes = {ProbeKind::gaussian, ProbeKind::medium_packet};
  const auto rows = perturbed_convergence_sweep(cfg, tanh_potential(1, 0.5, pauli(1), cfg.box),
                                                build_pair(PairKind::smooth_biorthogonal, 1));
  REQUIRE(rows.size() == 3);
  std::vector<SweepRecord> recs;
  for (const auto& r : rows) recs.push_back(r.record);
  CHECK(fit_rate(recs).slope >= 0.8 * theta_prime(1.0, 5.0, 1));
}
