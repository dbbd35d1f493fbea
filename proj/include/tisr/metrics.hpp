#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tisr/image.hpp"

namespace tisr {

inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

/// 10 log10(1 / MSE) with peak value 1. Identical images give +inf.
double psnr(const Image& a, const Image& b);

/// Mean local SSIM over all fully contained 11x11 Gaussian windows
/// (sigma 1.5, C1 = 0.01^2, C2 = 0.03^2).
double ssim(const Image& a, const Image& b);

/// Displacement in LR pixels such that b ~= shift(a, dy, dx): positive dy
/// moves content down, positive dx moves it left.
struct ShiftEstimate {
  double dx = 0.0;
  double dy = 0.0;
  /// Phase-correlation peak height over the mean absolute surface value.
  double confidence = 0.0;
};

/// Hann-tapered phase correlation to the integer pixel, then a local upsampled
/// cross-correlation (matrix-multiply DFT) refinement to 1/upsample pixel.
/// Throws ErrorCode::DegenerateInput for constant images.
ShiftEstimate estimate_shift(const Image& a, const Image& b, int upsample = 100);

struct MetricReport {
  std::string id;
  double psnr_db = 0.0;
  double ssim = 0.0;
  std::optional<ShiftEstimate> shift;
};

MetricReport evaluate_pair(std::string id, const Image& reconstruction,
                           const Image& ground_truth);

/// Means over finite PSNR rows (infinite rows are excluded from the PSNR
/// mean but not from the SSIM mean) and over available shift estimates.
MetricReport mean_report(const std::vector<MetricReport>& rows);

/// "id,psnr_db,ssim,est_dx,est_dy" header, one row per report, then a
/// "mean" row. Infinite PSNR prints as "inf"; missing shifts as empty fields.
void write_metrics_csv(std::ostream& out, const std::vector<MetricReport>& rows);

/// Formats a double for CSV output, "inf" for +infinity.
std::string format_metric(double value);

}  // namespace tisr
