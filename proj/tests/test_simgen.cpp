#include <doctest.h>

#include "support.hpp"
#include "tisr/metrics.hpp"
#include "tisr/simgen.hpp"

using namespace tisr;
using tisr::testing::random_image;
using tisr::testing::Rng;

TEST_CASE("ideal protocol") {
  const TwinPair flat = simulate_ideal(Image(16, 16, 0.25));
  for (double v : flat.y1.pixels()) CHECK(v == doctest::Approx(0.25).epsilon(1e-14));
  for (double v : flat.y2.pixels()) CHECK(v == doctest::Approx(0.25).epsilon(1e-14));

  Rng rng(1);
  const Image z = random_image(rng, 16, 12);
  const TwinPair pair = simulate_ideal(z);
  CHECK(pair.model.kernel.size() == 7);
  CHECK(pair.model.kernel.weights() == gaussian_kernel(7, 0.65).weights());
  CHECK(pair.true_shift_x == 0.5);
  CHECK(pair.true_shift_y == 0.5);
  CHECK(pair.ground_truth == z);
  const StackedObservation h = apply_H(DegradationModel::standard(16, 12), z);
  CHECK(pair.y1 == h.y1);
  CHECK(pair.y2 == h.y2);
  CHECK_NOTHROW(pair.validate());
  CHECK_THROWS_AS(simulate_ideal(Image(15, 16)), Error);
}

TEST_CASE("downsample_avg") {
  Rng rng(2);
  const Image img = random_image(rng, 12, 18);
  CHECK(downsample_avg(img, 1) == img);
  CHECK(downsample_avg(Image::from_pixels(2, 2, {0, 0, 1, 1}), 2)(0, 0) == 0.5);
  CHECK(tisr::testing::rel_diff(downsample_avg(Image(6, 6, 0.3), 3), Image(2, 2, 0.3)) <= 1e-15);
  for (std::size_t f : {2u, 3u, 6u}) {
    CHECK(std::abs(mean(downsample_avg(img, f)) - mean(img)) <= 1e-14);
  }
  CHECK_THROWS_AS(downsample_avg(img, 5), Error);
}

TEST_CASE("nonideal protocol") {
  const Image original = synthetic_scene(200, 200, 4);

  const TwinPair zero = simulate_nonideal(original, 0);
  CHECK(zero.y1 == zero.y2);
  CHECK(zero.true_shift_x == 0.0);
  CHECK(zero.y1.height() == 20);
  CHECK(zero.ground_truth->height() == 40);
  CHECK_NOTHROW(zero.validate());

  const TwinPair ideal = simulate_nonideal(original, 5);
  CHECK(ideal.true_shift_x == doctest::Approx(0.5));
  CHECK(ideal.true_shift_y == doctest::Approx(0.5));
  CHECK(*ideal.ground_truth == downsample_avg(original, 5));

  const TwinPair three = simulate_nonideal(synthetic_scene(640, 640, 9), 3);
  const ShiftEstimate est = estimate_shift(three.y1, three.y2);
  CHECK(std::abs(est.dx - 0.3) <= 0.1);
  CHECK(std::abs(est.dy - 0.3) <= 0.1);

  const TwinPair seven = simulate_nonideal(synthetic_scene(640, 640, 10), 7);
  const ShiftEstimate est7 = estimate_shift(seven.y1, seven.y2);
  CHECK(std::abs(est7.dx - 0.7) <= 0.05);
  CHECK(std::abs(est7.dy - 0.7) <= 0.05);

  CHECK_THROWS_AS(simulate_nonideal(original, 11), Error);
  CHECK_THROWS_AS(simulate_nonideal(Image(95, 100), 1), Error);
}

TEST_CASE("synthetic scenes") {
  const Image a = synthetic_scene(64, 48, 3);
  CHECK(a == synthetic_scene(64, 48, 3));
  CHECK_FALSE(a == synthetic_scene(64, 48, 4));
  for (double v : a.pixels()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  // textured, not flat
  double var = 0.0;
  const double mu = mean(a);
  for (double v : a.pixels()) var += (v - mu) * (v - mu);
  CHECK(var / static_cast<double>(a.size()) > 1e-3);
}

TEST_CASE("protocol names") {
  CHECK(parse_protocol("ideal") == ProtocolKind::Ideal);
  CHECK(parse_protocol("nonideal") == ProtocolKind::Nonideal);
  CHECK(std::string(to_string(ProtocolKind::Nonideal)) == "nonideal");
  CHECK_THROWS_AS(parse_protocol("other"), Error);
}

TEST_CASE("make_dataset") {
  Rng rng(5);
  const std::vector<SourceImage> sources = {{"a", random_image(rng, 1100, 600)},
                                            {"b", random_image(rng, 511, 2000)}};
  Protocol protocol;
  protocol.tile_size = 512;
  SUBCASE("tile count and ordering") {
    const auto entries = make_dataset(sources, {}, protocol, 0);
    // floor(1100/512) * floor(600/512) + floor(511/512) * floor(2000/512)
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].tile_id == "tile_0000");
    CHECK(entries[1].tile_row == 1);
    CHECK(entries[1].source == "a");
    CHECK(*entries[1].pair.ground_truth == crop(sources[0].image, 512, 0, 512, 512));
    for (const auto& e : entries) {
      CHECK_NOTHROW(e.pair.validate());
      CHECK(e.pair.y1.height() == 256);
    }
  }
  SUBCASE("synthetic sources follow the seed") {
    Protocol small;
    small.tile_size = 32;
    const SyntheticSources synth{2, 64, 32};
    const auto a = make_dataset({}, synth, small, 17);
    const auto b = make_dataset({}, synth, small, 17);
    const auto c = make_dataset({}, synth, small, 18);
    REQUIRE(a.size() == 4);
    CHECK(a[0].source == "synthetic:17");
    CHECK(a[3].source == "synthetic:18");
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].pair.y1 == b[i].pair.y1);
      CHECK(a[i].pair.y2 == b[i].pair.y2);
    }
    CHECK_FALSE(a[0].pair.y1 == c[0].pair.y1);
  }
  SUBCASE("nonideal tiles") {
    Protocol p;
    p.kind = ProtocolKind::Nonideal;
    p.tile_size = 100;
    p.shift_n = 2;
    const auto entries = make_dataset({{"s", random_image(rng, 200, 100)}}, {}, p, 0);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].pair.true_shift_x == doctest::Approx(0.2));
    CHECK(entries[0].pair.y1.height() == 10);
    p.tile_size = 105;
    CHECK_THROWS_AS(make_dataset({}, {}, p, 0), Error);
  }
}
