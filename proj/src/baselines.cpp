#include "tisr/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace tisr {

namespace {

double keys_weight(double x) {
  constexpr double a = -0.5;
  x = std::abs(x);
  if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  return 0.0;
}

struct Taps {
  std::array<std::size_t, 4> index;
  std::array<double, 4> weight;
};

// Four cubic taps for each of the 2n output samples along one axis.
std::vector<Taps> axis_taps(std::size_t n) {
  std::vector<Taps> taps(2 * n);
  for (std::size_t out = 0; out < 2 * n; ++out) {
    const double pos = static_cast<double>(out) / 2.0;
    const auto base = static_cast<long long>(std::floor(pos));
    for (int t = 0; t < 4; ++t) {
      const long long src = base - 1 + t;
      taps[out].index[t] = static_cast<std::size_t>(
          std::clamp<long long>(src, 0, static_cast<long long>(n) - 1));
      taps[out].weight[t] = keys_weight(pos - static_cast<double>(src));
    }
  }
  return taps;
}

double residual_norm(const StackedObservation& obs, const StackedObservation& hz) {
  return std::sqrt(dot(obs.y1 - hz.y1, obs.y1 - hz.y1) + dot(obs.y2 - hz.y2, obs.y2 - hz.y2));
}

}  // namespace

Image bicubic_x2(const Image& y) {
  const std::size_t h = y.height();
  const std::size_t w = y.width();
  const auto row_taps = axis_taps(h);
  const auto col_taps = axis_taps(w);

  Image horizontal(h, 2 * w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < 2 * w; ++c) {
      const Taps& t = col_taps[c];
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += t.weight[k] * y(r, t.index[k]);
      horizontal(r, c) = acc;
    }
  }
  Image out(2 * h, 2 * w);
  for (std::size_t r = 0; r < 2 * h; ++r) {
    const Taps& t = row_taps[r];
    for (std::size_t c = 0; c < 2 * w; ++c) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += t.weight[k] * horizontal(t.index[k], c);
      out(r, c) = acc;
    }
  }
  return out;
}

IbpResult ibp_reconstruct(const StackedObservation& obs, const DegradationModel& model,
                          const IbpOptions& options) {
  model.validate();
  if (options.iters < 0 || !(options.step >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "ibp needs iters >= 0 and step >= 0");
  }
  if (model.factor != 2) {
    throw Error(ErrorCode::InvalidArgument, "ibp initialization assumes factor 2");
  }
  IbpResult result;
  Image z = bicubic_x2(obs.y1);
  require_same_shape(z, Image(model.hr_height, model.hr_width), "ibp initialization");

  StackedObservation hz = apply_H(model, z);
  double residual = residual_norm(obs, hz);
  result.residuals.push_back(residual);
  Image best = z;
  double best_residual = residual;
  int growth = 0;

  for (int k = 0; k < options.iters && options.step > 0.0 && residual > 0.0; ++k) {
    StackedObservation r{obs.y1 - hz.y1, obs.y2 - hz.y2};
    axpy(options.step, apply_Ht(model, r), z);
    hz = apply_H(model, z);
    const double next = residual_norm(obs, hz);
    growth = next > residual ? growth + 1 : 0;
    residual = next;
    if (!std::isfinite(residual) || growth >= 3) {
      result.diverged = true;
      break;
    }
    result.residuals.push_back(residual);
    if (residual < best_residual) {
      best = z;
      best_residual = residual;
    }
  }
  result.z = result.diverged ? std::move(best) : std::move(z);
  return result;
}

}  // namespace tisr
