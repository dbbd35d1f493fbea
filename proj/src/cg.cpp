#include "tisr/cg.hpp"

#include <cmath>

namespace tisr {

namespace {

Image precondition(const Image& r, const std::optional<Image>& diagonal) {
  if (!diagonal) return r;
  Image z = r;
  auto pz = z.pixels();
  auto pd = diagonal->pixels();
  for (std::size_t i = 0; i < pz.size(); ++i) pz[i] /= pd[i];
  return z;
}

}  // namespace

CgResult cg_solve(const LinearOperator& apply_A, const Image& b, const Image& x0,
                  double tol, int max_iter, const std::optional<Image>& diagonal) {
  require_same_shape(b, x0, "cg_solve initial guess");
  if (diagonal) {
    require_same_shape(b, *diagonal, "cg_solve preconditioner");
    for (double d : diagonal->pixels()) {
      if (!(d > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "preconditioner must be positive");
      }
    }
  }
  if (!(tol > 0.0) || max_iter < 1) {
    throw Error(ErrorCode::InvalidArgument, "cg_solve needs tol > 0 and max_iter >= 1");
  }

  CgResult result;
  const double b_norm = norm(b);
  if (b_norm == 0.0) {
    result.x = Image(b.height(), b.width());
    result.converged = true;
    return result;
  }

  Image x = x0;
  Image r = b - apply_A(x);
  double rel = norm(r) / b_norm;
  Image best = x;
  double best_rel = rel;

  while (rel > tol && result.iterations < max_iter) {
    // (Re)start: search direction from the current true residual.
    Image z = precondition(r, diagonal);
    Image p = z;
    double rz = dot(r, z);
    bool restart = false;
    while (result.iterations < max_iter) {
      const Image ap = apply_A(p);
      const double curvature = dot(p, ap);
      if (!(curvature > 0.0) || !std::isfinite(curvature)) {
        throw Error(ErrorCode::Breakdown,
                    "cg_solve: non-positive curvature (operator not SPD?)");
      }
      const double step = rz / curvature;
      axpy(step, p, x);
      axpy(-step, ap, r);
      ++result.iterations;

      const double recursive_rel = norm(r) / b_norm;
      if (!std::isfinite(recursive_rel)) {
        throw Error(ErrorCode::Breakdown, "cg_solve: residual became non-finite");
      }
      if (recursive_rel <= tol) {
        r = b - apply_A(x);
        rel = norm(r) / b_norm;
        if (rel < best_rel) {
          best = x;
          best_rel = rel;
        }
        restart = true;
        break;
      }
      z = precondition(r, diagonal);
      const double rz_next = dot(r, z);
      p *= rz_next / rz;
      p += z;
      rz = rz_next;
    }
    if (!restart) {
      r = b - apply_A(x);
      rel = norm(r) / b_norm;
      if (rel < best_rel) {
        best = x;
        best_rel = rel;
      }
    }
  }

  result.x = std::move(best);
  result.residual = best_rel;
  result.converged = best_rel <= tol;
  return result;
}

}  // namespace tisr
