#pragma once

#include <functional>
#include <optional>

#include "tisr/image.hpp"

namespace tisr {

using LinearOperator = std::function<Image(const Image&)>;

struct CgResult {
  Image x;
  int iterations = 0;
  /// True relative residual ||A x - b|| / ||b|| of the returned iterate.
  double residual = 0.0;
  bool converged = false;
};

/// Conjugate gradient for a symmetric positive definite operator.
///
/// Stops when the relative residual, recomputed from scratch, is at most
/// `tol`. Returns the best iterate with `converged == false` when `max_iter`
/// is exhausted. An optional diagonal turns this into Jacobi-preconditioned
/// CG. Throws `ErrorCode::Breakdown` on a non-positive curvature or NaN,
/// which indicates the operator is not SPD.
CgResult cg_solve(const LinearOperator& apply_A, const Image& b, const Image& x0,
                  double tol, int max_iter,
                  const std::optional<Image>& diagonal = std::nullopt);

}  // namespace tisr
