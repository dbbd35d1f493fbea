#include <doctest.h>

#include <filesystem>
#include <string>

#include "support.hpp"
#include "tisr/image.hpp"

using namespace tisr;
using tisr::testing::Rng;

namespace {

std::vector<unsigned char> bytes_of(const std::string& s) {
  return std::vector<unsigned char>(s.begin(), s.end());
}

ErrorCode decode_error(const std::string& text) {
  try {
    decode_pgm(bytes_of(text));
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("decode_pgm accepted malformed input");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("image construction validates shape and values") {
  CHECK_THROWS_AS(Image(0, 3), Error);
  CHECK_THROWS_AS(Image(3, 0), Error);
  CHECK_THROWS_AS(Image::from_pixels(2, 2, {1, 2, 3}), Error);
  CHECK_THROWS_AS(Image::from_pixels(1, 2, {0.0, std::nan("")}), Error);
  const Image img = Image::from_pixels(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK(img.height() == 2);
  CHECK(img.width() == 3);
  CHECK(img(1, 0) == 4.0);
  CHECK(img.size() == 6);
}

TEST_CASE("ntsc luminance") {
  SUBCASE("white maps to one") {
    const auto rgb = RgbImage::from_pixels(1, 2, {1, 1, 1, 1, 1, 1});
    const Image y = ntsc_luminance(rgb);
    CHECK(y(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(y(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("pure red") {
    const Image y = ntsc_luminance(RgbImage::from_pixels(1, 1, {1, 0, 0}));
    CHECK(y(0, 0) == doctest::Approx(0.30).epsilon(1e-15));
  }
  SUBCASE("mixed pixel") {
    const Image y = ntsc_luminance(RgbImage::from_pixels(1, 1, {0.2, 0.4, 0.6}));
    CHECK(y(0, 0) == doctest::Approx(0.362).epsilon(1e-14));
  }
  SUBCASE("linear in the input") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      std::vector<double> pa(3 * 12), pb(3 * 12), mix(3 * 12);
      const double a = u(rng) * 2 - 1;
      const double b = u(rng) * 2 - 1;
      for (std::size_t i = 0; i < pa.size(); ++i) {
        pa[i] = u(rng);
        pb[i] = u(rng);
        mix[i] = a * pa[i] + b * pb[i];
      }
      const Image lhs = ntsc_luminance(RgbImage::from_pixels(3, 4, mix));
      const Image rhs = a * ntsc_luminance(RgbImage::from_pixels(3, 4, pa)) +
                        b * ntsc_luminance(RgbImage::from_pixels(3, 4, pb));
      CHECK(norm(lhs - rhs) <= 1e-14);
    }
  }
}

TEST_CASE("crop") {
  const Image r = tisr::testing::ramp(3, 3);
  CHECK(crop(r, 0, 0, 3, 3) == r);
  CHECK(crop(r, 1, 1, 2, 2) == Image::from_pixels(2, 2, {5, 6, 8, 9}));
  CHECK_THROWS_AS(crop(r, 0, 0, 4, 3), Error);
  CHECK_THROWS_AS(crop(r, 2, 2, 2, 1), Error);

  // crop of a crop equals one crop with composed offsets
  Rng rng(11);
  const Image big = tisr::testing::random_image(rng, 20, 17);
  std::uniform_int_distribution<std::size_t> pick(0, 5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t t1 = pick(rng), l1 = pick(rng);
    const std::size_t h1 = 20 - t1 - pick(rng), w1 = 17 - l1 - pick(rng);
    const Image first = crop(big, t1, l1, h1, w1);
    const std::size_t t2 = pick(rng) % h1, l2 = pick(rng) % w1;
    const std::size_t h2 = h1 - t2, w2 = w1 - l2;
    CHECK(crop(first, t2, l2, h2, w2) == crop(big, t1 + t2, l1 + l2, h2, w2));
  }
}

TEST_CASE("pgm decoding") {
  SUBCASE("8-bit payload maps linearly") {
    std::string text = "P5\n2 2\n255\n";
    text += std::string{char(0), char(128), char(255), char(64)};
    const Image img = decode_pgm(bytes_of(text));
    CHECK(img(0, 0) == 0.0);
    CHECK(img(0, 1) == 128.0 / 255.0);
    CHECK(img(1, 0) == 1.0);
    CHECK(img(1, 1) == 64.0 / 255.0);
  }
  SUBCASE("comments in the header") {
    std::string text = "P5 # magic\n# size follows\n1 1\n255\n";
    text += char(51);
    CHECK(decode_pgm(bytes_of(text))(0, 0) == 51.0 / 255.0);
  }
  SUBCASE("16-bit big endian") {
    std::string text = "P5\n1 2\n65535\n";
    text += std::string{char(0x01), char(0x02), char(0xff), char(0xff)};
    const Image img = decode_pgm(bytes_of(text));
    CHECK(img(0, 0) == 258.0 / 65535.0);
    CHECK(img(1, 0) == 1.0);
  }
  SUBCASE("error paths") {
    CHECK(decode_error("P6\n1 1\n255\n\x01\x02\x03") == ErrorCode::UnsupportedFormat);
    CHECK(decode_error("P2\n1 1\n255\n1") == ErrorCode::UnsupportedFormat);
    CHECK(decode_error("P5\n1 1\n1000\n\x01\x02") == ErrorCode::UnsupportedMaxval);
    CHECK(decode_error("P5\n2 2\n255\n\x01") == ErrorCode::TruncatedPayload);
    CHECK(decode_error("P5\nx 2\n255\n") == ErrorCode::MalformedHeader);
    CHECK(decode_error("P5\n0 2\n255\n") == ErrorCode::MalformedHeader);
    CHECK(decode_error("") == ErrorCode::UnsupportedFormat);
  }
}

TEST_CASE("pgm write then read") {
  const auto dir = std::filesystem::temp_directory_path() / "tisr_test_image";
  std::filesystem::create_directories(dir);

  SUBCASE("ramp keeps its quantized values") {
    Image r = tisr::testing::ramp(3, 3);
    r *= 1.0 / 9.0;
    write_image(r, dir / "ramp.pgm");
    const Image back = read_image(dir / "ramp.pgm");
    for (std::size_t i = 0; i < r.size(); ++i) {
      CHECK(back.pixels()[i] == std::round(r.pixels()[i] * 65535.0) / 65535.0);
    }
  }
  SUBCASE("out of range values are clamped") {
    const Image img = Image::from_pixels(1, 3, {-0.5, 0.5, 1.5});
    const Image back = decode_pgm(encode_pgm(img));
    CHECK(back(0, 0) == 0.0);
    CHECK(back(0, 2) == 1.0);
  }
  SUBCASE("round trip is bit exact at both depths") {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
      const Image img = tisr::testing::random_image(rng, 5, 7);
      const auto once = encode_pgm(img);
      CHECK(encode_pgm(decode_pgm(once)) == once);

      std::string text = "P5\n7 5\n255\n";
      std::uniform_int_distribution<int> byte(0, 255);
      for (int i = 0; i < 35; ++i) text += static_cast<char>(byte(rng));
      const Image eight = decode_pgm(bytes_of(text));
      CHECK(decode_pgm(encode_pgm(eight)) == eight);
    }
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_image(dir / "does_not_exist.pgm"), Error);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("vector helpers") {
  const Image a = Image::from_pixels(1, 3, {1, 2, 3});
  const Image b = Image::from_pixels(1, 3, {4, 5, 6});
  CHECK(dot(a, b) == 32.0);
  CHECK(sum(a) == 6.0);
  CHECK(mean(b) == 5.0);
  CHECK(norm(a) == doctest::Approx(std::sqrt(14.0)));
  Image y = b;
  axpy(2.0, a, y);
  CHECK(y == Image::from_pixels(1, 3, {6, 9, 12}));
  CHECK_THROWS_AS(dot(a, Image(3, 1)), Error);
}
