#pragma once

// Random generators and comparison helpers shared by the test binaries.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tisr/degradation.hpp"
#include "tisr/selfsim.hpp"

namespace tisr::testing {

using Rng = std::mt19937_64;

inline Image random_image(Rng& rng, std::size_t h, std::size_t w, double lo = 0.0,
                          double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Image img(h, w);
  for (double& p : img.pixels()) p = dist(rng);
  return img;
}

inline Image constant_image(std::size_t h, std::size_t w, double value) {
  return Image(h, w, value);
}

/// Row-major ramp with values 1..h*w.
inline Image ramp(std::size_t h, std::size_t w) {
  Image img(h, w);
  for (std::size_t i = 0; i < img.size(); ++i) img.pixels()[i] = static_cast<double>(i + 1);
  return img;
}

/// Random positive kernel of odd size, normalized to sum 1.
inline Kernel random_kernel(Rng& rng, std::size_t size) {
  std::uniform_real_distribution<double> dist(0.05, 1.0);
  std::vector<double> w(size * size);
  double total = 0.0;
  for (double& v : w) {
    v = dist(rng);
    total += v;
  }
  for (double& v : w) v /= total;
  // Absorb rounding so the sum is within the kernel's tolerance.
  double residual = 1.0;
  for (std::size_t i = 1; i < w.size(); ++i) residual -= w[i];
  w[0] = residual;
  return Kernel(size, std::move(w));
}

/// Graph with `edges` random (i, j) pairs (i != j) and positive weights.
inline SelfSimGraph random_graph(Rng& rng, const PatchGrid& grid, std::size_t edges) {
  SelfSimGraph g;
  g.grid = grid;
  g.neighbors_per_node = 0;
  const std::size_t n = grid.count();
  std::uniform_int_distribution<std::size_t> node(0, n - 1);
  std::uniform_real_distribution<double> weight(0.1, 3.0);
  while (g.edges.size() < edges) {
    const std::size_t i = node(rng);
    const std::size_t j = node(rng);
    if (i == j) continue;
    g.edges.push_back({i, j, weight(rng)});
  }
  return g;
}

inline double rel_diff(const Image& a, const Image& b) {
  const double scale = std::max(norm(b), 1e-300);
  return norm(a - b) / scale;
}

inline double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace tisr::testing
