#pragma once

#include <functional>
#include <vector>

#include "dlat/small_matrix.hpp"

namespace dlat {

struct SolverReport {
  int iterations = 0;
  /// Relative residual ||b - A x|| / ||b|| of the returned x.
  double residual = 0.0;
  bool converged = false;
};

using VectorOp = std::function<void(const std::vector<cplx>&, std::vector<cplx>&)>;

/// Restarted GMRES for A x = b (Euclidean inner product), starting from x.
/// Stops when ||b - A x|| <= tol ||b|| or after max_iter inner steps.
SolverReport gmres(const VectorOp& a, const std::vector<cplx>& b, std::vector<cplx>& x, double tol, int max_iter,
                   int restart);

/// Fixed-point iteration x <- b - (A - I) x for A = I + K with ||K|| < 1.
SolverReport fixed_point(const VectorOp& a, const std::vector<cplx>& b, std::vector<cplx>& x, double tol,
                         int max_iter);

}  // namespace dlat
