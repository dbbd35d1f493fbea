#include "tisr/selfsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>

namespace tisr {

PatchGrid::PatchGrid(std::size_t image_h, std::size_t image_w, std::size_t patch_size,
                     std::size_t stride)
    : image_h(image_h), image_w(image_w), patch_size(patch_size), stride(stride) {
  if (patch_size < 2) throw Error(ErrorCode::InvalidArgument, "patch size must be >= 2");
  if (stride < 1) throw Error(ErrorCode::InvalidArgument, "patch stride must be >= 1");
  if (patch_size > image_h || patch_size > image_w) {
    throw Error(ErrorCode::InvalidArgument, "patch larger than image");
  }
}

PatchGrid PatchGrid::downscaled(std::size_t factor) const {
  if (factor == 0 || patch_size % factor != 0 || stride % factor != 0 ||
      image_h % factor != 0 || image_w % factor != 0) {
    throw Error(ErrorCode::InvalidArgument,
                "patch geometry not divisible by factor " + std::to_string(factor));
  }
  PatchGrid lr(image_h / factor, image_w / factor, patch_size / factor,
               stride / factor);
  if (lr.rows() != rows() || lr.cols() != cols()) {
    throw Error(ErrorCode::DimensionMismatch, "downscaled lattice differs in size");
  }
  return lr;
}

namespace {

void require_grid(const Image& img, const PatchGrid& grid) {
  if (img.height() != grid.image_h || img.width() != grid.image_w) {
    throw Error(ErrorCode::DimensionMismatch, "patch grid does not match image");
  }
}

// Per-pixel flat offsets of one patch relative to its origin.
std::vector<std::size_t> patch_offsets(const PatchGrid& grid) {
  std::vector<std::size_t> offsets;
  offsets.reserve(grid.patch_pixels());
  for (std::size_t r = 0; r < grid.patch_size; ++r) {
    for (std::size_t c = 0; c < grid.patch_size; ++c) {
      offsets.push_back(r * grid.image_w + c);
    }
  }
  return offsets;
}

std::size_t origin_index(const PatchGrid& grid, std::size_t k) {
  return grid.origin_row(k) * grid.image_w + grid.origin_col(k);
}

}  // namespace

std::vector<double> extract_patch(const Image& img, const PatchGrid& grid,
                                  std::size_t k) {
  require_grid(img, grid);
  if (k >= grid.count()) throw Error(ErrorCode::OutOfBounds, "patch index out of range");
  std::vector<double> patch;
  patch.reserve(grid.patch_pixels());
  const std::size_t r0 = grid.origin_row(k);
  const std::size_t c0 = grid.origin_col(k);
  for (std::size_t r = 0; r < grid.patch_size; ++r) {
    for (std::size_t c = 0; c < grid.patch_size; ++c) patch.push_back(img(r0 + r, c0 + c));
  }
  return patch;
}

double edge_weight(const std::vector<double>& pa, const std::vector<double>& pb,
                   double eps) {
  if (pa.size() != pb.size()) {
    throw Error(ErrorCode::DimensionMismatch, "edge_weight: patch lengths differ");
  }
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  double acc = 0.0;
  for (std::size_t t = 0; t < pa.size(); ++t) {
    const double d = pa[t] - pb[t];
    acc += d * d;
  }
  return 1.0 / std::max(std::sqrt(acc), eps);
}

SelfSimGraph build_graph(const Image& ref, const PatchGrid& ref_grid,
                         const PatchGrid& hr_grid, std::size_t k, int search_radius,
                         double eps) {
  require_grid(ref, ref_grid);
  if (ref_grid.rows() != hr_grid.rows() || ref_grid.cols() != hr_grid.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "reference and HR patch lattices do not correspond");
  }
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "neighbor count must be positive");
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");

  const std::size_t count = ref_grid.count();
  const std::size_t rows = ref_grid.rows();
  const std::size_t cols = ref_grid.cols();
  std::vector<std::vector<double>> patches(count);
  for (std::size_t p = 0; p < count; ++p) patches[p] = extract_patch(ref, ref_grid, p);

  SelfSimGraph graph;
  graph.grid = hr_grid;
  graph.neighbors_per_node = k;

  struct Candidate {
    double alpha;
    std::size_t j;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t ri = i / cols;
    const std::size_t ci = i % cols;
    std::size_t r_lo = 0, r_hi = rows - 1, c_lo = 0, c_hi = cols - 1;
    if (search_radius >= 0) {
      const auto rad = static_cast<std::size_t>(search_radius);
      r_lo = ri > rad ? ri - rad : 0;
      c_lo = ci > rad ? ci - rad : 0;
      r_hi = std::min(rows - 1, ri + rad);
      c_hi = std::min(cols - 1, ci + rad);
    }
    candidates.clear();
    for (std::size_t r = r_lo; r <= r_hi; ++r) {
      for (std::size_t c = c_lo; c <= c_hi; ++c) {
        const std::size_t j = r * cols + c;
        if (j == i) continue;
        candidates.push_back({edge_weight(patches[i], patches[j], eps), j});
      }
    }
    const std::size_t take = std::min(k, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + take, candidates.end(),
                      [](const Candidate& a, const Candidate& b) {
                        return a.alpha > b.alpha || (a.alpha == b.alpha && a.j < b.j);
                      });
    std::sort(candidates.begin(), candidates.begin() + take,
              [](const Candidate& a, const Candidate& b) { return a.j < b.j; });
    for (std::size_t t = 0; t < take; ++t) {
      graph.edges.push_back({i, candidates[t].j, candidates[t].alpha});
    }
  }
  return graph;
}

double regularizer_value(const Image& z, const SelfSimGraph& graph) {
  require_grid(z, graph.grid);
  const auto offsets = patch_offsets(graph.grid);
  auto px = z.pixels();
  double total = 0.0;
  for (const auto& e : graph.edges) {
    const std::size_t oi = origin_index(graph.grid, e.i);
    const std::size_t oj = origin_index(graph.grid, e.j);
    double acc = 0.0;
    for (std::size_t off : offsets) {
      const double d = px[oi + off] - px[oj + off];
      acc += d * d;
    }
    total += e.alpha * acc;
  }
  return 0.5 * total;
}

Image apply_L(const Image& z, const SelfSimGraph& graph) {
  require_grid(z, graph.grid);
  const auto offsets = patch_offsets(graph.grid);
  Image out(z.height(), z.width());
  auto px = z.pixels();
  auto po = out.pixels();
  for (const auto& e : graph.edges) {
    const std::size_t oi = origin_index(graph.grid, e.i);
    const std::size_t oj = origin_index(graph.grid, e.j);
    for (std::size_t off : offsets) {
      const double d = e.alpha * (px[oi + off] - px[oj + off]);
      po[oi + off] += d;
      po[oj + off] -= d;
    }
  }
  return out;
}

Image laplacian_diagonal(const SelfSimGraph& graph) {
  const auto offsets = patch_offsets(graph.grid);
  Image diag(graph.grid.image_h, graph.grid.image_w);
  auto pd = diag.pixels();
  for (const auto& e : graph.edges) {
    const std::size_t oi = origin_index(graph.grid, e.i);
    const std::size_t oj = origin_index(graph.grid, e.j);
    for (std::size_t off : offsets) {
      pd[oi + off] += e.alpha;
      pd[oj + off] += e.alpha;
    }
  }
  return diag;
}

CgResult prox_f(const Image& v, const SelfSimGraph& graph, double weight, double tol,
                int max_iter, const Image* x0) {
  require_grid(v, graph.grid);
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw Error(ErrorCode::InvalidArgument, "prox weight must be nonnegative");
  }
  if (weight == 0.0 || graph.edges.empty()) {
    CgResult identity;
    identity.x = v;
    identity.converged = true;
    return identity;
  }
  Image diagonal = laplacian_diagonal(graph);
  diagonal *= weight;
  for (double& d : diagonal.pixels()) d += 1.0;
  auto op = [&](const Image& u) {
    Image out = apply_L(u, graph);
    out *= weight;
    out += u;
    return out;
  };
  CgResult result = cg_solve(op, v, x0 ? *x0 : v, tol, max_iter, diagonal);
  if (!result.converged) {
    throw Error(ErrorCode::NotConverged,
                "prox_f: CG stopped at relative residual " +
                    std::to_string(result.residual) + " after " +
                    std::to_string(result.iterations) + " iterations");
  }
  return result;
}

void write_graph(std::ostream& out, const SelfSimGraph& graph) {
  char line[96];
  for (const auto& e : graph.edges) {
    std::snprintf(line, sizeof line, "%zu %zu %.17g\n", e.i, e.j, e.alpha);
    out << line;
  }
}

}  // namespace tisr
