#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "dlat/small_matrix.hpp"

namespace dlat {

/// Spinor dimension nu(d): 2 for d = 1, 2 and 4 for d = 3.
int spinor_dim(int d);

/// Operator family.
///   continuous : -i alpha.grad + m beta
///   fb         : forward/backward differences
///   s          : symmetric differences
///   fb_mod     : fb plus the Wilson-type mass term -h Delta_h beta
///   s_mod      : s  plus the Wilson-type mass term -h Delta_h beta
enum class ModelKind { continuous, fb, s, fb_mod, s_mod };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

struct ModelId {
  ModelKind kind = ModelKind::continuous;
  int d = 1;
  double m = 0.0;
  /// Mesh size. Ignored by the continuous symbol except where an operation
  /// needs a momentum box (the torus of the partner model).
  double h = 1.0;

  int nu() const { return spinor_dim(d); }
  bool discrete() const { return kind != ModelKind::continuous; }
  bool modified() const { return kind == ModelKind::fb_mod || kind == ModelKind::s_mod; }

  /// Throws ArgumentError unless d in {1,2,3}, m >= 0 and h > 0 for discrete kinds.
  void validate() const;
  std::string label() const;
};

/// Momentum vector of length d.
using Momentum = std::vector<double>;

/// Pauli matrix sigma_j, j in {1,2,3}.
SymbolMatrix pauli(int j);

struct DiracMatrices {
  std::array<SymbolMatrix, 3> alpha;
  SymbolMatrix beta;
};

/// Standard representation: beta = diag(1, -1) blocks, alpha_j = offdiag(sigma_j).
DiracMatrices dirac_matrices();

SymbolMatrix continuous_symbol(const ModelId& model, const Momentum& xi);
SymbolMatrix discrete_symbol(const ModelId& model, const Momentum& xi);
/// Dispatches on model.kind.
SymbolMatrix symbol(const ModelId& model, const Momentum& xi);

/// Sum_j (4/h) sin^2(h xi_j / 2); equals h times the symbol of -Delta_h.
double f_mod(int d, double h, const Momentum& xi);

/// Scalar g with G(xi)^2 = g(xi) 1, from the closed-form expressions (not
/// from squaring the matrix). Throws UnsupportedModelError for fb/fb_mod in d = 3.
double scalar_g(const ModelId& model, const Momentum& xi);

struct SquaredSymbolEigs {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Extreme eigenvalues of 1 + G(xi)^2 via
///   1 + M^2 + |S|^2 -/+ |S x conj(S)|,
/// where M is the diagonal mass term and S the vector in the off-diagonal
/// blocks. Exact for every kind in d = 3; scalar-square models give
/// lambda_min = lambda_max = 1 + g.
SquaredSymbolEigs squared_symbol_eigs(const ModelId& model, const Momentum& xi);

/// Off-diagonal vector S(xi) (S^- for fb kinds), length d.
std::vector<cplx> offdiagonal_vector(const ModelId& model, const Momentum& xi);

/// (G - z)^{-1}. When G^2 is scalar the inverse is (G + z)/(g - z^2);
/// otherwise LU with partial pivoting. Throws SingularMatrixError when z is
/// (numerically) an eigenvalue of G.
SymbolMatrix resolvent_at(const SymbolMatrix& g, cplx z);

/// Spectral norm (largest singular value). 2x2 via the Pauli decomposition of
/// M^H M, 4x4 via Jacobi eigenvalues of M^H M.
double matrix_norm(const SymbolMatrix& m);

}  // namespace dlat
