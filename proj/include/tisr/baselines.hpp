#pragma once

#include <vector>

#include "tisr/degradation.hpp"

namespace tisr {

/// 2x cubic-convolution upscaling (Keys, a = -0.5) with replicate boundary.
/// Output pixel (R, C) samples the LR grid at (R / 2, C / 2).
Image bicubic_x2(const Image& y);

struct IbpOptions {
  int iters = 50;
  double step = 0.5;
};

struct IbpResult {
  Image z;
  /// ||y - H z|| for the initialization and every accepted iterate.
  std::vector<double> residuals;
  /// Set when the residual grew three iterations in a row; `z` is then the
  /// best iterate seen.
  bool diverged = false;
};

/// Iterative back projection through both observations:
/// z <- z + step H^T (y - H z), starting from bicubic_x2(y1).
IbpResult ibp_reconstruct(const StackedObservation& obs, const DegradationModel& model,
                          const IbpOptions& options = {});

}  // namespace tisr
