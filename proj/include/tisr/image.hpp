#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "tisr/error.hpp"

namespace tisr {

/// Row-major grayscale image of normalized intensities.
///
/// Values are nominally in [0,1] but solver iterates may leave that range;
/// clamping only happens when writing to disk. Every stored value is finite
/// when the image is built through `from_pixels`.
class Image {
 public:
  Image() = default;
  /// Zero-filled image. Throws on a zero dimension.
  Image(std::size_t height, std::size_t width, double fill = 0.0);

  /// Validating constructor: checks size and finiteness.
  static Image from_pixels(std::size_t height, std::size_t width,
                           std::vector<double> pixels);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    return pixels_[r * width_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return pixels_[r * width_ + c];
  }

  std::span<double> pixels() noexcept { return pixels_; }
  std::span<const double> pixels() const noexcept { return pixels_; }

  bool same_shape(const Image& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }

  bool operator==(const Image& other) const = default;

  Image& operator+=(const Image& other);
  Image& operator-=(const Image& other);
  Image& operator*=(double s);

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> pixels_;
};

Image operator+(Image a, const Image& b);
Image operator-(Image a, const Image& b);
Image operator*(double s, Image a);

/// Row-major RGB image, channels interleaved.
struct RgbImage {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> pixels;  // 3 * height * width

  static RgbImage from_pixels(std::size_t height, std::size_t width,
                              std::vector<double> pixels);
};

void require_same_shape(const Image& a, const Image& b, const char* what);

double dot(const Image& a, const Image& b);
double norm(const Image& a);
double sum(const Image& a);
double mean(const Image& a);
/// y += s * x
void axpy(double s, const Image& x, Image& y);
bool all_finite(const Image& a);

/// Panchromatic conversion with NTSC luminance weights (0.30, 0.59, 0.11).
Image ntsc_luminance(const RgbImage& img);

Image crop(const Image& img, std::size_t top, std::size_t left, std::size_t h,
           std::size_t w);

/// Binary PGM (P5). Accepts maxval 255 or 65535; intensities are divided by
/// maxval on read.
Image read_image(const std::filesystem::path& path);
Image decode_pgm(std::span<const unsigned char> bytes);

/// Writes 16-bit P5 (maxval 65535). Values are clamped to [0,1] and rounded.
void write_image(const Image& img, const std::filesystem::path& path);
std::vector<unsigned char> encode_pgm(const Image& img);

}  // namespace tisr
