#include <doctest.h>

#include <cmath>
#include <random>

#include "dlat/errors.hpp"
#include "dlat/embedding.hpp"
#include "dlat/experiments.hpp"

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

std::vector<cplx> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> v(n);
  for (auto& c : v) c = cplx(nd(rng), nd(rng));
  return v;
}

cplx weighted_inner(const std::vector<cplx>& a, const std::vector<cplx>& b, double w) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return w * s;
}

double max_diff(const LatticeField& a, const LatticeField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

}  // namespace

TEST_CASE("pair kinds and pair constants") {
  CHECK(parse_pair_kind(to_string(PairKind::orthonormal_sinc)) == PairKind::orthonormal_sinc);
  CHECK(parse_pair_kind(to_string(PairKind::smooth_biorthogonal)) == PairKind::smooth_biorthogonal);
  CHECK_THROWS_AS(parse_pair_kind("haar"), ArgumentError);
  CHECK(build_pair(PairKind::orthonormal_sinc, 2).tau == 1.0);
  CHECK(std::isinf(build_pair(PairKind::smooth_biorthogonal, 2).tau));
  CHECK_THROWS_AS(build_pair(PairKind::smooth_biorthogonal, 0), ArgumentError);
}

TEST_CASE("smooth step is a C-infinity partition of unity") {
  CHECK(smooth_step(-0.5) == 0.0);
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
  for (double x = 0.01; x < 1.0; x += 0.07) CHECK(smooth_step(x) + smooth_step(1.0 - x) == doctest::Approx(1.0));
}

TEST_CASE("generator transforms: aliases sum to one, low band stays bounded below") {
  for (PairKind k : {PairKind::orthonormal_sinc, PairKind::smooth_biorthogonal}) {
    const RieszPair p = build_pair(k, 1);
    for (double t = -kPi + 1e-3; t < kPi; t += 0.05) {
      double s = 0.0;
      for (int j = -2; j <= 2; ++j) s += p.phi_factor(t + 2 * kPi * j) * p.psi_factor(t + 2 * kPi * j);
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (double t = -kPi / 2; t <= kPi / 2; t += 0.1) {
      CHECK(std::abs(p.phi_hat({t})) >= p.c0);
      CHECK(std::abs(p.psi_hat({t})) >= p.c0);
    }
    CHECK(p.psi_factor(3.5 * kPi) == 0.0);
  }
}

TEST_CASE("sinc generator vanishes at nonzero integers; smooth generator decays fast") {
  const RieszPair sinc = build_pair(PairKind::orthonormal_sinc, 1);
  CHECK(sinc.psi0({0.0}) == doctest::Approx(1.0));
  for (int k = 1; k < 6; ++k) CHECK(std::abs(sinc.psi0({double(k)})) < 1e-14);
  const RieszPair smooth = build_pair(PairKind::smooth_biorthogonal, 1);
  CHECK(std::abs(smooth.psi0({8.0})) < 1e-3 * std::abs(smooth.psi0({0.0})));
  CHECK(std::abs(smooth.phi0({8.0})) < 1e-2 * std::abs(smooth.phi0({0.0})));
}

TEST_CASE("K J is the identity and J K a projection") {
  for (PairKind k : {PairKind::orthonormal_sinc, PairKind::smooth_biorthogonal})
    for (int d = 1; d <= 2; ++d) {
      const RieszPair pair = build_pair(k, d);
      const PeriodicLattice coarse{d, 8, 0.5};
      const LatticeField u = random_field(coarse, 2, 3);
      const FineGridFunction ju = embed_Jh(pair, u, 4);
      CHECK(max_diff(discretize_Kh(pair, ju, coarse.h), u) < 1e-12);
      const FineGridFunction f = random_field(fine_lattice(coarse, 4), 2, 4);
      const FineGridFunction p1 = embed_Jh(pair, discretize_Kh(pair, f, coarse.h), 4);
      const FineGridFunction p2 = embed_Jh(pair, discretize_Kh(pair, p1, coarse.h), 4);
      CHECK(max_diff(p1, p2) < 1e-12);
    }
}

TEST_CASE("sinc embedding is an isometry") {
  const RieszPair pair = build_pair(PairKind::orthonormal_sinc, 2);
  const LatticeField u = random_field(PeriodicLattice{2, 8, 0.25}, 2, 5);
  CHECK(embed_Jh(pair, u, 4).norm() == doctest::Approx(u.norm()).epsilon(1e-12));
}

TEST_CASE("phi-discretisation is the adjoint of J, psi-embedding the adjoint of K") {
  const RieszPair pair = build_pair(PairKind::smooth_biorthogonal, 2);
  const PeriodicLattice coarse{2, 8, 0.5};
  const LatticeField u = random_field(coarse, 2, 6);
  const FineGridFunction f = random_field(fine_lattice(coarse, 4), 2, 7);
  const cplx a = embed_Jh(pair, u, 4).inner(f), b = u.inner(discretize_with_phi(pair, f, coarse.h));
  CHECK(std::abs(a - b) < 1e-12 * std::abs(a));
  const cplx c = discretize_Kh(pair, f, coarse.h).inner(u), e = f.inner(embed_with_psi(pair, u, 4));
  CHECK(std::abs(c - e) < 1e-12 * std::abs(c));
}

TEST_CASE("coefficient-space maps carry consistent adjoints") {
  const RieszPair pair = build_pair(PairKind::smooth_biorthogonal, 1);
  const PeriodicLattice coarse{1, 16, 0.25};
  for (const LinearMap& t : {embedding_map(pair, coarse, 4), discretization_map(pair, coarse, 4)}) {
    const auto x = random_vector(t.in_size, 1), y = random_vector(t.out_size, 2);
    std::vector<cplx> tx, ty;
    t.apply(x, tx);
    t.adjoint(y, ty);
    const cplx lhs = weighted_inner(tx, y, t.out_weight), rhs = weighted_inner(x, ty, t.in_weight);
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));
  }
  const LinearMap c = composite_resolvent_map(pair, ModelId{ModelKind::s_mod, 1, 0.0, 0.25}, kI, fine_lattice(coarse, 4));
  const auto x = random_vector(c.in_size, 3), y = random_vector(c.out_size, 4);
  std::vector<cplx> tx, ty;
  c.apply(x, tx);
  c.adjoint(y, ty);
  const cplx lhs = weighted_inner(tx, y, c.out_weight), rhs = weighted_inner(x, ty, c.in_weight);
  CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));
}

TEST_CASE("refinement must be a power of two of at least four") {
  const PeriodicLattice coarse{1, 8, 0.5};
  CHECK_THROWS_AS(fine_lattice(coarse, 2), ArgumentError);
  CHECK_THROWS_AS(fine_lattice(coarse, 6), ArgumentError);
  CHECK(fine_lattice(coarse, 8).n == 64);
}

TEST_CASE("continuum resolvent inverts the continuum operator") {
  const PeriodicLattice fine{2, 32, 0.125};
  const ModelId c{ModelKind::continuous, 2, 0.5, 1.0};
  const cplx z{0.3, 1.0};
  const FineGridFunction f = random_field(fine, 2, 8);
  FineGridFunction r = continuum_apply(c, continuum_resolvent(c, z, f));
  r -= z * continuum_resolvent(c, z, f);
  r -= f;
  CHECK(r.norm() < 1e-11 * f.norm());
  CHECK(h1_norm(f) >= f.norm());
}

TEST_CASE("probes are normalised and the spectral form matches the field") {
  const PeriodicLattice fine{2, 64, 4.0 / 64};
  for (ProbeKind k : all_probes()) {
    const SpectralProbe sp = make_spectral_probe(k, fine, 0.25, 2, 5);
    const FineGridFunction f = make_probe(k, fine, 0.25, 2, 5);
    CHECK(f.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_diff(sp.to_field(), f) == 0.0);
    FineGridFunction fh = f;
    to_fourier(fh);
    double worst = 0.0;
    for (std::size_t s = 0; s < fine.sites(); ++s) {
      const auto c = site_coords(fine, s);
      cplx out[4];
      sp.coeff(c.data(), out);
      for (int a = 0; a < 2; ++a) worst = std::max(worst, std::abs(out[a] - fh.at(s, a)));
    }
    CHECK(worst < 1e-12);
  }
  CHECK_THROWS_AS(make_probe(ProbeKind::gaussian, fine, 0.25, 4, 1), ArgumentError);
}

TEST_CASE("streamed spectral gap agrees with the field-based gap") {
  for (int d = 1; d <= 2; ++d)
    for (PairKind pk : {PairKind::smooth_biorthogonal, PairKind::orthonormal_sinc}) {
      const RieszPair pair = build_pair(pk, d);
      const double h = 0.25;
      const PeriodicLattice fine = fine_lattice(PeriodicLattice{d, 16, h}, 4);
      const ModelId model{d == 1 ? ModelKind::fb : ModelKind::s_mod, d, 1.0, h};
      for (ProbeKind k : {ProbeKind::gaussian, ProbeKind::edge_packet, ProbeKind::random_band}) {
        const SpectralProbe sp = make_spectral_probe(k, fine, h, 2, 9);
        const ProbeGap a = resolvent_gap_spectral(pair, model, cplx(0.5, 1.0), sp);
        const ProbeGap b = resolvent_gap_on_probe(pair, model, cplx(0.5, 1.0), sp.to_field());
        CHECK(a.l2 == doctest::Approx(b.l2).epsilon(1e-9));
        CHECK(a.h1 == doctest::Approx(b.h1).epsilon(1e-9));
      }
    }
}

TEST_CASE("operator gap of the 1D Wilson model halves with h") {
  OperatorGapConfig cfg = default_operator_gap_config(ModelKind::s_mod, 1, 1.0);
  cfg.h_list = {1.0 / 16, 1.0 / 32, 1.0 / 64};
  const auto rows = operator_gap_sweep(cfg);
  REQUIRE(rows.size() == 3);
  CHECK(rows[2].l2_max / rows[1].l2_max == doctest::Approx(0.5).epsilon(0.1));
  CHECK(rows[1].l2_max / rows[0].l2_max == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("dyadic h lists") {
  const auto h = dyadic_h_list(2, 4);
  REQUIRE(h.size() == 3);
  CHECK(h[0] == 0.25);
  CHECK(h[2] == 0.0625);
}
