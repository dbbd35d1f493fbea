#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "tisr/cg.hpp"
#include "tisr/image.hpp"

namespace tisr {

/// Row-major lattice of q x q patches whose top-left corners lie on a stride
/// grid and which fit entirely inside the image.
struct PatchGrid {
  std::size_t image_h = 0;
  std::size_t image_w = 0;
  std::size_t patch_size = 0;
  std::size_t stride = 1;

  PatchGrid() = default;
  PatchGrid(std::size_t image_h, std::size_t image_w, std::size_t patch_size,
            std::size_t stride);

  std::size_t rows() const { return (image_h - patch_size) / stride + 1; }
  std::size_t cols() const { return (image_w - patch_size) / stride + 1; }
  std::size_t count() const { return rows() * cols(); }
  std::size_t patch_pixels() const { return patch_size * patch_size; }

  std::size_t origin_row(std::size_t k) const { return (k / cols()) * stride; }
  std::size_t origin_col(std::size_t k) const { return (k % cols()) * stride; }

  /// Geometry of the same patches on an image downscaled by `factor`.
  PatchGrid downscaled(std::size_t factor) const;

  bool operator==(const PatchGrid&) const = default;
};

struct GraphEdge {
  std::size_t i = 0;
  std::size_t j = 0;
  double alpha = 0.0;

  bool operator==(const GraphEdge&) const = default;
};

/// Weighted patch graph; edges index patches of `grid` (HR geometry) and are
/// sorted by (i, j).
struct SelfSimGraph {
  PatchGrid grid;
  std::vector<GraphEdge> edges;
  std::size_t neighbors_per_node = 0;
};

inline constexpr double kDefaultAlphaEps = 1e-6;
/// Pass as `search_radius` to compare every pair of patches.
inline constexpr int kFullSearch = -1;

std::vector<double> extract_patch(const Image& img, const PatchGrid& grid,
                                  std::size_t k);

/// 1 / max(||pa - pb||, eps).
double edge_weight(const std::vector<double>& pa, const std::vector<double>& pb,
                   double eps = kDefaultAlphaEps);

/// For every patch of `ref` (on `ref_grid`), keeps the k most similar other
/// patches within `search_radius` lattice steps (ties go to the lower index)
/// and emits the edges on `hr_grid`, which must enumerate the same lattice.
SelfSimGraph build_graph(const Image& ref, const PatchGrid& ref_grid,
                         const PatchGrid& hr_grid, std::size_t k, int search_radius,
                         double eps = kDefaultAlphaEps);

/// f(z) = 1/2 sum_(i,j) alpha_ij ||P_i z - P_j z||^2.
double regularizer_value(const Image& z, const SelfSimGraph& graph);

/// Gradient of f, i.e. L z with L = sum alpha_ij (P_i - P_j)^T (P_i - P_j).
Image apply_L(const Image& z, const SelfSimGraph& graph);

/// Diagonal of L as an image.
Image laplacian_diagonal(const SelfSimGraph& graph);

/// argmin_z weight f(z) + 1/2 ||z - v||^2, i.e. (I + weight L) z = v, solved
/// by Jacobi-preconditioned CG warm-started at `x0` (or at v).
/// Throws ErrorCode::NotConverged when `max_iter` is exhausted.
CgResult prox_f(const Image& v, const SelfSimGraph& graph, double weight,
                double tol, int max_iter, const Image* x0 = nullptr);

/// "i j alpha" per line, in edge order.
void write_graph(std::ostream& out, const SelfSimGraph& graph);

}  // namespace tisr
