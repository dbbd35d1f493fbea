#include "tisr/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <string>

namespace tisr {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::OutOfBounds: return "out of bounds";
    case ErrorCode::UnsupportedFormat: return "unsupported format";
    case ErrorCode::MalformedHeader: return "malformed header";
    case ErrorCode::TruncatedPayload: return "truncated payload";
    case ErrorCode::UnsupportedMaxval: return "unsupported maxval";
    case ErrorCode::Io: return "i/o error";
    case ErrorCode::NotConverged: return "not converged";
    case ErrorCode::Breakdown: return "numerical breakdown";
    case ErrorCode::DegenerateInput: return "degenerate input";
    case ErrorCode::Config: return "configuration error";
  }
  return "unknown error";
}

Image::Image(std::size_t height, std::size_t width, double fill)
    : height_(height), width_(width), pixels_(height * width, fill) {
  if (height == 0 || width == 0) {
    throw Error(ErrorCode::InvalidArgument, "image dimensions must be positive");
  }
}

Image Image::from_pixels(std::size_t height, std::size_t width,
                         std::vector<double> pixels) {
  if (height == 0 || width == 0) {
    throw Error(ErrorCode::InvalidArgument, "image dimensions must be positive");
  }
  if (pixels.size() != height * width) {
    throw Error(ErrorCode::DimensionMismatch,
                "pixel count does not match height * width");
  }
  if (!std::all_of(pixels.begin(), pixels.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::InvalidArgument, "non-finite pixel value");
  }
  Image img;
  img.height_ = height;
  img.width_ = width;
  img.pixels_ = std::move(pixels);
  return img;
}

Image& Image::operator+=(const Image& other) {
  require_same_shape(*this, other, "image addition");
  for (std::size_t i = 0; i < pixels_.size(); ++i) pixels_[i] += other.pixels_[i];
  return *this;
}

Image& Image::operator-=(const Image& other) {
  require_same_shape(*this, other, "image subtraction");
  for (std::size_t i = 0; i < pixels_.size(); ++i) pixels_[i] -= other.pixels_[i];
  return *this;
}

Image& Image::operator*=(double s) {
  for (double& v : pixels_) v *= s;
  return *this;
}

Image operator+(Image a, const Image& b) { return a += b; }
Image operator-(Image a, const Image& b) { return a -= b; }
Image operator*(double s, Image a) { return a *= s; }

RgbImage RgbImage::from_pixels(std::size_t height, std::size_t width,
                               std::vector<double> pixels) {
  if (height == 0 || width == 0) {
    throw Error(ErrorCode::InvalidArgument, "image dimensions must be positive");
  }
  if (pixels.size() != 3 * height * width) {
    throw Error(ErrorCode::DimensionMismatch,
                "rgb pixel count does not match 3 * height * width");
  }
  if (!std::all_of(pixels.begin(), pixels.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::InvalidArgument, "non-finite pixel value");
  }
  return RgbImage{height, width, std::move(pixels)};
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a.height()) + "x" +
                    std::to_string(a.width()) + " vs " +
                    std::to_string(b.height()) + "x" + std::to_string(b.width()));
  }
}

double dot(const Image& a, const Image& b) {
  require_same_shape(a, b, "dot");
  auto pa = a.pixels();
  auto pb = b.pixels();
  double acc = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) acc += pa[i] * pb[i];
  return acc;
}

double norm(const Image& a) { return std::sqrt(dot(a, a)); }

double sum(const Image& a) {
  auto p = a.pixels();
  return std::accumulate(p.begin(), p.end(), 0.0);
}

double mean(const Image& a) { return sum(a) / static_cast<double>(a.size()); }

void axpy(double s, const Image& x, Image& y) {
  require_same_shape(x, y, "axpy");
  auto px = x.pixels();
  auto py = y.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) py[i] += s * px[i];
}

bool all_finite(const Image& a) {
  auto p = a.pixels();
  return std::all_of(p.begin(), p.end(), [](double v) { return std::isfinite(v); });
}

Image ntsc_luminance(const RgbImage& img) {
  Image out(img.height, img.width);
  auto dst = out.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double* px = &img.pixels[3 * i];
    dst[i] = 0.30 * px[0] + 0.59 * px[1] + 0.11 * px[2];
  }
  return out;
}

Image crop(const Image& img, std::size_t top, std::size_t left, std::size_t h,
           std::size_t w) {
  if (h == 0 || w == 0 || top + h > img.height() || left + w > img.width()) {
    throw Error(ErrorCode::OutOfBounds, "crop window exceeds image bounds");
  }
  Image out(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) out(r, c) = img(top + r, left + c);
  }
  return out;
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const unsigned char> bytes) : bytes_(bytes) {}

  std::size_t next_number() {
    skip_whitespace_and_comments();
    std::size_t value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
      if (value > (1u << 30)) {
        throw Error(ErrorCode::MalformedHeader, "pgm header value too large");
      }
      ++pos_;
      ++digits;
    }
    if (digits == 0) {
      throw Error(ErrorCode::MalformedHeader, "expected number in pgm header");
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorCode::MalformedHeader, "missing whitespace before raster");
    }
    return pos_ + 1;
  }

 private:
  void skip_whitespace_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

Image decode_pgm(std::span<const unsigned char> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') {
    throw Error(ErrorCode::UnsupportedFormat, "not a netpbm file");
  }
  if (bytes[1] != '5') {
    throw Error(ErrorCode::UnsupportedFormat,
                std::string("unsupported netpbm variant P") +
                    static_cast<char>(bytes[1]));
  }
  HeaderReader header(bytes);
  const std::size_t width = header.next_number();
  const std::size_t height = header.next_number();
  const std::size_t maxval = header.next_number();
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::MalformedHeader, "pgm dimensions must be positive");
  }
  if (maxval != 255 && maxval != 65535) {
    throw Error(ErrorCode::UnsupportedMaxval,
                "unsupported pgm maxval " + std::to_string(maxval));
  }
  const std::size_t offset = header.raster_offset();
  const std::size_t bytes_per_sample = maxval == 255 ? 1 : 2;
  const std::size_t count = width * height;
  if (bytes.size() < offset + count * bytes_per_sample) {
    throw Error(ErrorCode::TruncatedPayload, "pgm raster is truncated");
  }
  std::vector<double> pixels(count);
  const double scale = static_cast<double>(maxval);
  const unsigned char* raster = bytes.data() + offset;
  for (std::size_t i = 0; i < count; ++i) {
    unsigned value = bytes_per_sample == 1
                         ? raster[i]
                         : (static_cast<unsigned>(raster[2 * i]) << 8) | raster[2 * i + 1];
    pixels[i] = static_cast<double>(value) / scale;
  }
  return Image::from_pixels(height, width, std::move(pixels));
}

Image read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return decode_pgm(bytes);
}

std::vector<unsigned char> encode_pgm(const Image& img) {
  const std::string header = "P5\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n65535\n";
  std::vector<unsigned char> bytes(header.begin(), header.end());
  bytes.reserve(header.size() + 2 * img.size());
  for (double v : img.pixels()) {
    const double clamped = std::clamp(v, 0.0, 1.0);
    const auto q = static_cast<unsigned>(std::lround(clamped * 65535.0));
    bytes.push_back(static_cast<unsigned char>(q >> 8));
    bytes.push_back(static_cast<unsigned char>(q & 0xff));
  }
  return bytes;
}

void write_image(const Image& img, const std::filesystem::path& path) {
  const auto bytes = encode_pgm(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace tisr
