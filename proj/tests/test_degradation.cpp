#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tisr/degradation.hpp"
#include "tisr/dense.hpp"

using namespace tisr;
using tisr::testing::random_image;
using tisr::testing::random_kernel;
using tisr::testing::rel_gap;
using tisr::testing::Rng;

namespace {

// Correlation with explicit clamped indices.
Image brute_force_blur(const Image& img, const Kernel& k) {
  const long h = static_cast<long>(img.height());
  const long w = static_cast<long>(img.width());
  const long rad = static_cast<long>(k.radius());
  Image out(img.height(), img.width());
  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c) {
      double acc = 0.0;
      for (long i = -rad; i <= rad; ++i) {
        for (long j = -rad; j <= rad; ++j) {
          const long rr = std::clamp(r + i, 0L, h - 1);
          const long cc = std::clamp(c + j, 0L, w - 1);
          acc += k(static_cast<std::size_t>(i + rad), static_cast<std::size_t>(j + rad)) *
                 img(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
        }
      }
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = acc;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("gaussian kernel") {
  CHECK(gaussian_kernel(1, 3.7).weights() == std::vector<double>{1.0});

  const Kernel k7 = gaussian_kernel(7, 0.65);
  double total = 0.0;
  for (double v : k7.weights()) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 0; j < 7; ++j) {
      CHECK(k7(i, j) <= k7(3, 3));
      CHECK(k7(i, j) == k7(j, i));
      CHECK(k7(i, j) == k7(6 - i, j));
      CHECK(k7(i, j) == k7(i, 6 - j));
    }
  }

  // exp(-1 / 1.3)
  const Kernel k3 = gaussian_kernel(3, 0.65);
  CHECK(k3(0, 1) / k3(1, 1) == doctest::Approx(0.46336936923117533).epsilon(1e-14));

  CHECK_THROWS_AS(gaussian_kernel(4, 0.65), Error);
  CHECK_THROWS_AS(gaussian_kernel(3, 0.0), Error);
  CHECK_THROWS_AS(Kernel(3, std::vector<double>(9, 0.2)), Error);
}

TEST_CASE("blur") {
  Rng rng(1);
  CHECK(tisr::testing::rel_diff(blur(Image(5, 6, 0.3), gaussian_kernel(3, 0.65)),
                                Image(5, 6, 0.3)) <= 1e-15);
  for (const Image& img : {random_image(rng, 5, 5), random_image(rng, 9, 4)}) {
    CHECK(blur(img, Kernel::identity()) == img);
    CHECK(blur_adjoint(img, Kernel::identity()) == img);
  }
  for (int trial = 0; trial < 10; ++trial) {
    const Image img = random_image(rng, 9, 9);
    const Kernel k = random_kernel(rng, 3);
    CHECK(norm(blur(img, k) - brute_force_blur(img, k)) <= 1e-14);
  }
  const Image constant = blur(Image(8, 8, 0.7), gaussian_kernel(7, 0.65));
  for (double v : constant.pixels()) CHECK(v == doctest::Approx(0.7).epsilon(1e-14));
  CHECK_THROWS_AS(blur(Image(4, 8), gaussian_kernel(7, 0.65)), Error);
}

TEST_CASE("blur adjoint") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Kernel k = random_kernel(rng, 3);
    const Image u = random_image(rng, 8, 8, -1, 1);
    const Image w = random_image(rng, 8, 8, -1, 1);
    CHECK(rel_gap(dot(blur(u, k), w), dot(u, blur_adjoint(w, k))) <= 1e-12);
  }
  // Transposing the dense adjoint recovers the dense forward operator.
  const Kernel k = random_kernel(rng, 3);
  Eigen::MatrixXd adj(36, 36);
  for (int j = 0; j < 36; ++j) {
    Image e(6, 6);
    e.pixels()[static_cast<std::size_t>(j)] = 1.0;
    adj.col(j) = dense::to_vector(blur_adjoint(e, k));
  }
  CHECK((adj.transpose() - dense::blur_matrix(6, 6, k)).norm() <= 1e-14);
}

TEST_CASE("decimate") {
  Rng rng(3);
  const Image r = tisr::testing::ramp(4, 4);
  CHECK(decimate(r, 1) == r);
  CHECK(decimate(r, 2) == Image::from_pixels(2, 2, {1, 3, 9, 11}));
  CHECK(decimate(Image(6, 4, 0.25), 2) == Image(3, 2, 0.25));

  const Image up = decimate_adjoint(Image::from_pixels(2, 2, {1, 2, 3, 4}), 2, 4, 4);
  CHECK(up == Image::from_pixels(4, 4, {1, 0, 2, 0, 0, 0, 0, 0, 3, 0, 4, 0, 0, 0, 0, 0}));
  CHECK(decimate_adjoint(r, 1, 4, 4) == r);

  for (int trial = 0; trial < 20; ++trial) {
    const Image u = random_image(rng, 8, 6, -1, 1);
    const Image w = random_image(rng, 4, 3, -1, 1);
    CHECK(rel_gap(dot(decimate(u, 2), w), dot(u, decimate_adjoint(w, 2, 8, 6))) <= 1e-14);
  }
  CHECK_THROWS_AS(decimate(Image(5, 4), 2), Error);
}

TEST_CASE("shift") {
  const Image img = Image::from_pixels(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  CHECK(shift(img, 0, 0) == img);
  CHECK(shift(img, 1, 1) == Image::from_pixels(3, 3, {2, 3, 3, 2, 3, 3, 5, 6, 6}));
  CHECK(shift(Image(4, 4, 0.2), 2, -1) == Image(4, 4, 0.2));
  CHECK(shift_adjoint(img, 0, 0) == img);
  CHECK_THROWS_AS(shift(img, 3, 0), Error);

  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> off(-3, 3);
    const int dr = off(rng), dc = off(rng);
    const Image u = random_image(rng, 6, 6, -1, 1);
    const Image w = random_image(rng, 6, 6, -1, 1);
    CHECK(rel_gap(dot(shift(u, dr, dc), w), dot(u, shift_adjoint(w, dr, dc))) <= 1e-14);
  }

  // Each row of S picks exactly one pixel, so the scatter keeps total mass.
  const Eigen::MatrixXd s = dense::shift_matrix(4, 4, 1, 1);
  CHECK((s.rowwise().sum() - Eigen::VectorXd::Ones(16)).norm() == 0.0);
  const Image w = random_image(rng, 4, 4);
  CHECK(sum(shift_adjoint(w, 1, 1)) == doctest::Approx(sum(w)).epsilon(1e-14));
}

TEST_CASE("stacked operator") {
  const DegradationModel model = DegradationModel::standard(8, 8);
  CHECK(model.kernel.size() == 7);
  CHECK(model.shift_rows == 1);
  CHECK(model.shift_cols == 1);

  const StackedObservation half = apply_H(model, Image(8, 8, 0.5));
  for (double v : half.y1.pixels()) CHECK(v == doctest::Approx(0.5).epsilon(1e-14));
  for (double v : half.y2.pixels()) CHECK(v == doctest::Approx(0.5).epsilon(1e-14));

  const StackedObservation zero = apply_H(model, Image(8, 8));
  CHECK(norm(zero.y1) == 0.0);
  CHECK(norm(zero.y2) == 0.0);
  CHECK(norm(apply_Ht(model, zero)) == 0.0);

  Rng rng(5);
  const Eigen::MatrixXd H = dense::stacked_matrix(model);
  for (int trial = 0; trial < 10; ++trial) {
    const Image z = random_image(rng, 8, 8);
    const StackedObservation y = apply_H(model, z);
    CHECK((dense::stack(y) - H * dense::to_vector(z)).norm() <= 1e-14);

    StackedObservation w{random_image(rng, 4, 4), random_image(rng, 4, 4)};
    CHECK((dense::to_vector(apply_Ht(model, w)) - H.transpose() * dense::stack(w)).norm() <=
          1e-14);
    CHECK(rel_gap(dot(y, w), dot(z, apply_Ht(model, w))) <= 1e-12);
  }
}

TEST_CASE("stacked operator properties") {
  Rng rng(6);
  std::uniform_int_distribution<std::size_t> half(4, 9);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t h = 2 * half(rng), w = 2 * half(rng);
    DegradationModel model;
    model.kernel = random_kernel(rng, 5);
    model.hr_height = h;
    model.hr_width = w;
    const Image u = random_image(rng, h, w, -1, 1);
    const Image v = random_image(rng, h, w, -1, 1);
    const double a = coef(rng), b = coef(rng);

    // linearity
    const StackedObservation lhs = apply_H(model, a * u + b * v);
    const StackedObservation hu = apply_H(model, u);
    const StackedObservation hv = apply_H(model, v);
    CHECK(norm(lhs.y1 - (a * hu.y1 + b * hv.y1)) <= 1e-13);
    CHECK(norm(lhs.y2 - (a * hu.y2 + b * hv.y2)) <= 1e-13);

    // H^T H + c I is bounded below by c
    const double c = 0.5;
    CHECK(dot(hu, hu) + c * dot(u, u) >= c * dot(u, u));

    // constants are preserved
    const StackedObservation k = apply_H(model, Image(h, w, a));
    for (double p : k.y1.pixels()) CHECK(p == doctest::Approx(a).epsilon(1e-13));
  }
}
