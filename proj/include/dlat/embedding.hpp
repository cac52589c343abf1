#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dlat/lattice.hpp"

namespace dlat {

enum class PairKind { orthonormal_sinc, smooth_biorthogonal };

std::string_view to_string(PairKind kind);
PairKind parse_pair_kind(std::string_view name);

/// The generator pair defining J_h and K_h. Both transforms are real,
/// even and of tensor-product form prod_j w(xi_j).
struct RieszPair {
  PairKind kind = PairKind::smooth_biorthogonal;
  int d = 1;
  /// Lower bound of |phi_hat|, |psi_hat| on [-pi/2, pi/2]^d.
  double c0 = 0.0;
  /// Decay exponent of psi_0: 1 for the sinc pair; infinity for the smooth
  /// pair (super-polynomial decay, see measure_tau for a finite fit).
  double tau = 0.0;

  double phi_hat(const Momentum& xi) const;
  double psi_hat(const Momentum& xi) const;
  /// One-dimensional factors (without the (2 pi)^{-1/2} normalisation).
  double phi_factor(double t) const;
  double psi_factor(double t) const;
  /// psi_0 and phi_0 in position space, by quadrature of the 1D factors.
  double psi0(const std::vector<double>& x) const;
  double phi0(const std::vector<double>& x) const;
};

RieszPair build_pair(PairKind kind, int d);

/// Smooth step used by the plateau: 0 for x <= 0, 1 for x >= 1,
/// s(x) / (s(x) + s(1 - x)) with s(x) = exp(-1/x) in between.
double smooth_step(double x);

/// The band-limited continuum stand-in: a field on the periodic fine lattice
/// of spacing h/R over the same box as the coarse lattice.
using FineGridFunction = LatticeField;

PeriodicLattice fine_lattice(const PeriodicLattice& coarse, int R);

/// J_h u on the fine lattice (refinement R >= 4, power of two).
FineGridFunction embed_Jh(const RieszPair& pair, const LatticeField& u, int R);
/// The same embedding built from psi_hat; equals K_h^*.
FineGridFunction embed_with_psi(const RieszPair& pair, const LatticeField& u, int R);
/// K_h f for a fine-grid function whose spacing refines h by an integer R >= 4.
LatticeField discretize_Kh(const RieszPair& pair, const FineGridFunction& f, double h);
/// The same discretisation built from phi_hat; equals J_h^*.
LatticeField discretize_with_phi(const RieszPair& pair, const FineGridFunction& f, double h);

/// Fourier-coefficient versions (unitary DFT coefficients of coarse and fine
/// fields). Used by the experiments so that the whole chain is diagonal.
void embed_hat(const RieszPair& pair, bool use_phi, const LatticeField& u_hat, FineGridFunction& out_hat);
void discretize_hat(const RieszPair& pair, bool use_psi, const FineGridFunction& f_hat, LatticeField& out_hat);

/// (H_0 - z)^{-1} f on the fine grid via the continuous symbol.
FineGridFunction continuum_resolvent(const ModelId& continuum, cplx z, const FineGridFunction& f);
/// H_0 f on the fine grid.
FineGridFunction continuum_apply(const ModelId& continuum, const FineGridFunction& f);

/// ||(1 + |xi|^2)^{1/2} f_hat||.
double h1_norm(const FineGridFunction& f);

struct ProbeGap {
  /// ||J_h R_h(z) K_h f - R(z) f|| / ||f||
  double l2 = 0.0;
  /// The same difference divided by ||f||_{H^1}.
  double h1 = 0.0;
};

/// Resolvent gap of a discrete model against the continuum on one probe. The
/// coarse lattice has spacing model.h and the probe's box; R is inferred.
ProbeGap resolvent_gap_on_probe(const RieszPair& pair, const ModelId& model, cplx z, const FineGridFunction& f);

/// T = J_h R_h(z) K_h - R(z) on the fine grid and its adjoint, as a LinearMap
/// acting on fine-grid DFT coefficients (unitary, so norms agree).
LinearMap composite_resolvent_map(const RieszPair& pair, const ModelId& model, cplx z, const PeriodicLattice& fine);

enum class ProbeKind { gaussian, small_packet, medium_packet, edge_packet, random_band };

std::string_view to_string(ProbeKind kind);
const std::vector<ProbeKind>& all_probes();

/// Probe on the fine lattice (box side L = fine.side()), for coarse mesh h.
/// Packets are periodised Gaussians of width L/4 centred in the box, times a
/// carrier:
///   gaussian       no carrier
///   small_packet   carrier 2 pi / L along axis 1
///   medium_packet  carrier h xi = pi/2 (pattern (1, -1, 0) in d >= 2)
///   edge_packet    carrier h xi = pi on every axis
///   random_band    random coefficients on |k_j| <= 1 (in units 2 pi / L)
/// Normalised to ||f|| = 1.
FineGridFunction make_probe(ProbeKind kind, const PeriodicLattice& fine, double h, int nu, std::uint64_t seed);

/// A probe kept in Fourier space: either spinor x prod_a A_a(p_a) (packets and
/// Gaussian) or dense coefficients on a small box of low modes (random_band).
/// Coefficients are unitary DFT coefficients on the fine lattice.
struct SpectralProbe {
  PeriodicLattice fine;
  int nu = 2;
  bool separable = true;
  std::array<cplx, 4> spinor{};
  std::vector<std::vector<cplx>> axis_hat;
  int kmax = 0;
  std::vector<cplx> band;

  /// Coefficients at fine DFT multi-index p (length d), written to out[0..nu).
  void coeff(const int* p, cplx* out) const;
  /// Materialise in position space.
  FineGridFunction to_field() const;
};

SpectralProbe make_spectral_probe(ProbeKind kind, const PeriodicLattice& fine, double h, int nu,
                                  std::uint64_t seed);

/// J_h and K_h as maps between DFT coefficient vectors with the physical
/// (h^d and (h/R)^d weighted) inner products; adjoints included.
LinearMap embedding_map(const RieszPair& pair, const PeriodicLattice& coarse, int R);
LinearMap discretization_map(const RieszPair& pair, const PeriodicLattice& coarse, int R);

/// resolvent_gap_on_probe evaluated momentum by momentum without forming
/// fine-grid fields; the coarse lattice has spacing model.h.
ProbeGap resolvent_gap_spectral(const RieszPair& pair, const ModelId& model, cplx z, const SpectralProbe& probe);

}  // namespace dlat
