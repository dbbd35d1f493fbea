#pragma once

#include <cstddef>
#include <vector>

#include "tisr/image.hpp"

namespace tisr {

/// Odd-sized square correlation kernel whose weights sum to one.
class Kernel {
 public:
  /// Validates odd size, finiteness and unit sum (within 1e-12).
  Kernel(std::size_t size, std::vector<double> weights);

  std::size_t size() const noexcept { return size_; }
  std::size_t radius() const noexcept { return size_ / 2; }
  double operator()(std::size_t i, std::size_t j) const {
    return weights_[i * size_ + j];
  }
  const std::vector<double>& weights() const noexcept { return weights_; }

  static Kernel identity() { return Kernel(1, {1.0}); }

 private:
  std::size_t size_;
  std::vector<double> weights_;
};

/// Normalized isotropic Gaussian, exp(-d^2 / (2 variance)).
Kernel gaussian_kernel(std::size_t size, double variance);

/// 2-D correlation with replicate boundary extension.
Image blur(const Image& img, const Kernel& kernel);
Image blur_adjoint(const Image& img, const Kernel& kernel);

/// Top-left decimation: out(r, c) = in(factor r, factor c).
Image decimate(const Image& img, std::size_t factor);
/// Zero-insertion upsampling to out_h x out_w.
Image decimate_adjoint(const Image& img, std::size_t factor, std::size_t out_h,
                       std::size_t out_w);

/// out(r, c) = in(clamp(r - rows), clamp(c + cols)): positive arguments move
/// content down and left.
Image shift(const Image& img, int rows, int cols);
Image shift_adjoint(const Image& img, int rows, int cols);

struct StackedObservation {
  Image y1;
  Image y2;
};

double dot(const StackedObservation& a, const StackedObservation& b);

/// Twin-image forward model H = [D B; D B S].
struct DegradationModel {
  Kernel kernel = Kernel::identity();
  std::size_t factor = 2;
  int shift_rows = 1;
  int shift_cols = 1;
  std::size_t hr_height = 0;
  std::size_t hr_width = 0;

  /// Model with the default 7x7, variance 0.65 Gaussian and a one-pixel
  /// diagonal twin shift.
  static DegradationModel standard(std::size_t hr_height, std::size_t hr_width);

  std::size_t lr_height() const { return hr_height / factor; }
  std::size_t lr_width() const { return hr_width / factor; }

  /// Throws unless dimensions are positive, divisible by the factor and the
  /// kernel fits the HR grid.
  void validate() const;
};

StackedObservation apply_H(const DegradationModel& model, const Image& z);
Image apply_Ht(const DegradationModel& model, const StackedObservation& obs);

}  // namespace tisr
