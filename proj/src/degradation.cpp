#include "tisr/degradation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

namespace tisr {

namespace {

std::size_t clamp_index(long long i, std::size_t n) {
  if (i < 0) return 0;
  if (i >= static_cast<long long>(n)) return n - 1;
  return static_cast<std::size_t>(i);
}

// idx[p * size + t] = clamp(p + t - radius): source index for output p, tap t.
std::vector<std::size_t> tap_table(std::size_t n, std::size_t size) {
  const auto radius = static_cast<long long>(size / 2);
  std::vector<std::size_t> idx(n * size);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t t = 0; t < size; ++t) {
      idx[p * size + t] =
          clamp_index(static_cast<long long>(p + t) - radius, n);
    }
  }
  return idx;
}

void require_kernel_fits(const Image& img, const Kernel& kernel) {
  if (kernel.size() > img.height() || kernel.size() > img.width()) {
    throw Error(ErrorCode::InvalidArgument, "kernel larger than image");
  }
}

void require_factor(const Image& img, std::size_t factor) {
  if (factor == 0) throw Error(ErrorCode::InvalidArgument, "factor must be positive");
  if (img.height() % factor != 0 || img.width() % factor != 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "image dimensions not divisible by factor " + std::to_string(factor));
  }
}

void require_shift(const Image& img, int rows, int cols) {
  if (static_cast<std::size_t>(std::abs(rows)) >= img.height() ||
      static_cast<std::size_t>(std::abs(cols)) >= img.width()) {
    throw Error(ErrorCode::InvalidArgument, "shift magnitude exceeds image size");
  }
}

// Blur evaluated only on the decimation lattice; same summation order as
// blur() followed by decimate().
Image blur_decimate(const Image& img, const Kernel& kernel, std::size_t factor) {
  const std::size_t k = kernel.size();
  const auto rows = tap_table(img.height(), k);
  const auto cols = tap_table(img.width(), k);
  Image out(img.height() / factor, img.width() / factor);
  for (std::size_t r = 0; r < out.height(); ++r) {
    const std::size_t* ri = &rows[r * factor * k];
    for (std::size_t c = 0; c < out.width(); ++c) {
      const std::size_t* ci = &cols[c * factor * k];
      double acc = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) acc += kernel(i, j) * img(ri[i], ci[j]);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

// Adjoint of blur_decimate: scatter each LR sample through the kernel taps.
Image blur_decimate_adjoint(const Image& lr, const Kernel& kernel,
                            std::size_t factor, std::size_t out_h,
                            std::size_t out_w) {
  const std::size_t k = kernel.size();
  const auto rows = tap_table(out_h, k);
  const auto cols = tap_table(out_w, k);
  Image out(out_h, out_w);
  for (std::size_t r = 0; r < lr.height(); ++r) {
    const std::size_t* ri = &rows[r * factor * k];
    for (std::size_t c = 0; c < lr.width(); ++c) {
      const std::size_t* ci = &cols[c * factor * k];
      const double v = lr(r, c);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) out(ri[i], ci[j]) += kernel(i, j) * v;
      }
    }
  }
  return out;
}

}  // namespace

Kernel::Kernel(std::size_t size, std::vector<double> weights)
    : size_(size), weights_(std::move(weights)) {
  if (size == 0 || size % 2 == 0) {
    throw Error(ErrorCode::InvalidArgument, "kernel size must be odd");
  }
  if (weights_.size() != size * size) {
    throw Error(ErrorCode::DimensionMismatch, "kernel weight count != size^2");
  }
  if (!std::all_of(weights_.begin(), weights_.end(),
                   [](double w) { return std::isfinite(w); })) {
    throw Error(ErrorCode::InvalidArgument, "non-finite kernel weight");
  }
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "kernel weights must sum to 1");
  }
}

Kernel gaussian_kernel(std::size_t size, double variance) {
  if (size == 0 || size % 2 == 0) {
    throw Error(ErrorCode::InvalidArgument, "gaussian kernel size must be odd");
  }
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw Error(ErrorCode::InvalidArgument, "gaussian variance must be positive");
  }
  const double center = static_cast<double>(size - 1) / 2.0;
  std::vector<double> w(size * size);
  double total = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      const double di = static_cast<double>(i) - center;
      const double dj = static_cast<double>(j) - center;
      w[i * size + j] = std::exp(-(di * di + dj * dj) / (2.0 * variance));
      total += w[i * size + j];
    }
  }
  for (double& v : w) v /= total;
  return Kernel(size, std::move(w));
}

Image blur(const Image& img, const Kernel& kernel) {
  require_kernel_fits(img, kernel);
  return blur_decimate(img, kernel, 1);
}

Image blur_adjoint(const Image& img, const Kernel& kernel) {
  require_kernel_fits(img, kernel);
  return blur_decimate_adjoint(img, kernel, 1, img.height(), img.width());
}

Image decimate(const Image& img, std::size_t factor) {
  require_factor(img, factor);
  Image out(img.height() / factor, img.width() / factor);
  for (std::size_t r = 0; r < out.height(); ++r) {
    for (std::size_t c = 0; c < out.width(); ++c) out(r, c) = img(factor * r, factor * c);
  }
  return out;
}

Image decimate_adjoint(const Image& img, std::size_t factor, std::size_t out_h,
                       std::size_t out_w) {
  if (factor == 0) throw Error(ErrorCode::InvalidArgument, "factor must be positive");
  if (out_h != img.height() * factor || out_w != img.width() * factor) {
    throw Error(ErrorCode::DimensionMismatch,
                "decimate_adjoint output shape inconsistent with factor");
  }
  Image out(out_h, out_w);
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) out(factor * r, factor * c) = img(r, c);
  }
  return out;
}

Image shift(const Image& img, int rows, int cols) {
  require_shift(img, rows, cols);
  const std::size_t h = img.height();
  const std::size_t w = img.width();
  Image out(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t sr = clamp_index(static_cast<long long>(r) - rows, h);
    for (std::size_t c = 0; c < w; ++c) {
      out(r, c) = img(sr, clamp_index(static_cast<long long>(c) + cols, w));
    }
  }
  return out;
}

Image shift_adjoint(const Image& img, int rows, int cols) {
  require_shift(img, rows, cols);
  const std::size_t h = img.height();
  const std::size_t w = img.width();
  Image out(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t sr = clamp_index(static_cast<long long>(r) - rows, h);
    for (std::size_t c = 0; c < w; ++c) {
      out(sr, clamp_index(static_cast<long long>(c) + cols, w)) += img(r, c);
    }
  }
  return out;
}

double dot(const StackedObservation& a, const StackedObservation& b) {
  return dot(a.y1, b.y1) + dot(a.y2, b.y2);
}

DegradationModel DegradationModel::standard(std::size_t hr_height,
                                            std::size_t hr_width) {
  DegradationModel model;
  model.kernel = gaussian_kernel(7, 0.65);
  model.factor = 2;
  model.shift_rows = 1;
  model.shift_cols = 1;
  model.hr_height = hr_height;
  model.hr_width = hr_width;
  model.validate();
  return model;
}

void DegradationModel::validate() const {
  if (factor == 0) throw Error(ErrorCode::InvalidArgument, "factor must be positive");
  if (hr_height == 0 || hr_width == 0 || hr_height % factor != 0 ||
      hr_width % factor != 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "HR dimensions must be positive multiples of the factor");
  }
  if (kernel.size() > hr_height || kernel.size() > hr_width) {
    throw Error(ErrorCode::InvalidArgument, "kernel larger than HR image");
  }
  if (static_cast<std::size_t>(std::abs(shift_rows)) >= hr_height ||
      static_cast<std::size_t>(std::abs(shift_cols)) >= hr_width) {
    throw Error(ErrorCode::InvalidArgument, "twin shift exceeds HR image size");
  }
}

StackedObservation apply_H(const DegradationModel& model, const Image& z) {
  if (z.height() != model.hr_height || z.width() != model.hr_width) {
    throw Error(ErrorCode::DimensionMismatch, "apply_H: image does not match model");
  }
  return {blur_decimate(z, model.kernel, model.factor),
          blur_decimate(shift(z, model.shift_rows, model.shift_cols), model.kernel,
                        model.factor)};
}

Image apply_Ht(const DegradationModel& model, const StackedObservation& obs) {
  const std::size_t m = model.lr_height();
  const std::size_t n = model.lr_width();
  if (obs.y1.height() != m || obs.y1.width() != n || obs.y2.height() != m ||
      obs.y2.width() != n) {
    throw Error(ErrorCode::DimensionMismatch, "apply_Ht: observation does not match model");
  }
  Image out = blur_decimate_adjoint(obs.y1, model.kernel, model.factor,
                                    model.hr_height, model.hr_width);
  out += shift_adjoint(blur_decimate_adjoint(obs.y2, model.kernel, model.factor,
                                             model.hr_height, model.hr_width),
                       model.shift_rows, model.shift_cols);
  return out;
}

}  // namespace tisr
