#include "tisr/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>

namespace tisr {

void TwinPair::validate() const {
  require_same_shape(y1, y2, "twin pair");
  if (!(true_shift_x >= 0.0 && true_shift_x <= 1.0 && true_shift_y >= 0.0 &&
        true_shift_y <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "twin shifts must lie in [0, 1]");
  }
  if (y1.height() != model.lr_height() || y1.width() != model.lr_width()) {
    throw Error(ErrorCode::DimensionMismatch, "twin pair does not match its model");
  }
  if (ground_truth && (ground_truth->height() != model.factor * y1.height() ||
                       ground_truth->width() != model.factor * y1.width())) {
    throw Error(ErrorCode::DimensionMismatch, "ground truth is not factor x LR size");
  }
}

TwinPair simulate_ideal(const Image& z, const Kernel& kernel) {
  if (z.height() % 2 != 0 || z.width() % 2 != 0) {
    throw Error(ErrorCode::DimensionMismatch, "ideal protocol needs even HR dimensions");
  }
  TwinPair pair;
  pair.model = DegradationModel::standard(z.height(), z.width());
  pair.model.kernel = kernel;
  pair.model.validate();
  StackedObservation obs = apply_H(pair.model, z);
  pair.y1 = std::move(obs.y1);
  pair.y2 = std::move(obs.y2);
  pair.true_shift_x = 0.5;
  pair.true_shift_y = 0.5;
  pair.ground_truth = z;
  return pair;
}

Image downsample_avg(const Image& img, std::size_t factor) {
  if (factor == 0) throw Error(ErrorCode::InvalidArgument, "factor must be positive");
  if (img.height() % factor != 0 || img.width() % factor != 0) {
    throw Error(ErrorCode::DimensionMismatch, "image dimensions not divisible by factor");
  }
  Image out(img.height() / factor, img.width() / factor);
  const double inv = 1.0 / static_cast<double>(factor * factor);
  for (std::size_t r = 0; r < out.height(); ++r) {
    for (std::size_t c = 0; c < out.width(); ++c) {
      double acc = 0.0;
      for (std::size_t i = 0; i < factor; ++i) {
        for (std::size_t j = 0; j < factor; ++j) acc += img(factor * r + i, factor * c + j);
      }
      out(r, c) = acc * inv;
    }
  }
  return out;
}

TwinPair simulate_nonideal(const Image& original, int shift_rows_n, int shift_cols_n,
                           const Kernel& kernel) {
  if (original.height() % 10 != 0 || original.width() % 10 != 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "nonideal protocol needs dimensions divisible by 10");
  }
  if (shift_rows_n < 0 || shift_rows_n > 10 || shift_cols_n < 0 || shift_cols_n > 10) {
    throw Error(ErrorCode::InvalidArgument, "shift_n must lie in 0..10");
  }
  TwinPair pair;
  pair.ground_truth = downsample_avg(original, 5);
  pair.model = DegradationModel::standard(pair.ground_truth->height(),
                                          pair.ground_truth->width());
  pair.y1 = downsample_avg(blur(original, kernel), 10);
  if (shift_rows_n == 0 && shift_cols_n == 0) {
    pair.y2 = pair.y1;
  } else {
    pair.y2 = downsample_avg(blur(shift(original, shift_rows_n, shift_cols_n), kernel), 10);
  }
  pair.true_shift_x = 0.1 * shift_cols_n;
  pair.true_shift_y = 0.1 * shift_rows_n;
  return pair;
}

Image synthetic_scene(std::size_t height, std::size_t width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  const double h = static_cast<double>(height);
  const double w = static_cast<double>(width);

  Image img(height, width);

  // Smooth background and fine texture: random plane waves with a 1/f
  // amplitude falloff, accumulated separably via row/column phasors.
  auto add_waves = [&](int count, double f_lo, double f_hi, double amplitude) {
    std::vector<std::complex<double>> row_phase(height), col_phase(width);
    for (int k = 0; k < count; ++k) {
      const double f = f_lo * std::pow(f_hi / f_lo, unit(rng));  // cycles per pixel
      const double theta = two_pi * unit(rng);
      const double phi = two_pi * unit(rng);
      const double amp = amplitude * (f_lo / f);
      const double fr = f * std::sin(theta);
      const double fc = f * std::cos(theta);
      for (std::size_t r = 0; r < height; ++r) {
        row_phase[r] = std::polar(1.0, two_pi * fr * static_cast<double>(r) + phi);
      }
      for (std::size_t c = 0; c < width; ++c) {
        col_phase[c] = std::polar(1.0, two_pi * fc * static_cast<double>(c));
      }
      for (std::size_t r = 0; r < height; ++r) {
        for (std::size_t c = 0; c < width; ++c) {
          img(r, c) += amp * (row_phase[r] * col_phase[c]).real();
        }
      }
    }
  };
  add_waves(24, 1.0 / std::max(h, w), 0.02, 0.12);
  add_waves(40, 0.02, 0.35, 0.05);
  for (double& v : img.pixels()) v += 0.45;

  // Blocks with flat interiors and a gentle internal gradient.
  const int blocks = 6 + static_cast<int>(unit(rng) * 10.0);
  for (int b = 0; b < blocks; ++b) {
    const double bh = h * (0.04 + 0.16 * unit(rng));
    const double bw = w * (0.04 + 0.16 * unit(rng));
    const double top = (h - bh) * unit(rng);
    const double left = (w - bw) * unit(rng);
    const double level = 0.15 + 0.7 * unit(rng);
    const double slope = 0.1 * (unit(rng) - 0.5);
    const auto r0 = static_cast<std::size_t>(top);
    const auto c0 = static_cast<std::size_t>(left);
    const auto r1 = std::min(height, static_cast<std::size_t>(top + bh));
    const auto c1 = std::min(width, static_cast<std::size_t>(left + bw));
    for (std::size_t r = r0; r < r1; ++r) {
      for (std::size_t c = c0; c < c1; ++c) {
        const double t = (static_cast<double>(c) - left) / bw;
        img(r, c) = 0.35 * img(r, c) + 0.65 * (level + slope * t);
      }
    }
  }

  // Linear features of random orientation and width.
  const int lines = 3 + static_cast<int>(unit(rng) * 4.0);
  for (int l = 0; l < lines; ++l) {
    const double theta = std::numbers::pi * unit(rng);
    const double nr = std::sin(theta);
    const double nc = std::cos(theta);
    const double offset = (unit(rng) - 0.5) * std::hypot(h, w) * 0.8;
    const double half_width = 0.4 + 2.5 * unit(rng);
    const double level = unit(rng) < 0.5 ? 0.1 + 0.2 * unit(rng) : 0.75 + 0.2 * unit(rng);
    for (std::size_t r = 0; r < height; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        const double d = std::abs((static_cast<double>(r) - h / 2) * nr +
                                  (static_cast<double>(c) - w / 2) * nc - offset);
        if (d < half_width + 1.0) {
          const double cover = std::clamp(half_width + 1.0 - d, 0.0, 1.0);
          img(r, c) = (1.0 - cover) * img(r, c) + cover * level;
        }
      }
    }
  }

  for (double& v : img.pixels()) v = std::clamp(v, 0.0, 1.0);
  return img;
}

const char* to_string(ProtocolKind kind) {
  return kind == ProtocolKind::Ideal ? "ideal" : "nonideal";
}

ProtocolKind parse_protocol(const std::string& name) {
  if (name == "ideal") return ProtocolKind::Ideal;
  if (name == "nonideal") return ProtocolKind::Nonideal;
  throw Error(ErrorCode::InvalidArgument, "unknown protocol '" + name + "'");
}

std::vector<SourceImage> synthetic_sources(const SyntheticSources& spec,
                                           std::uint64_t seed) {
  std::vector<SourceImage> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    out.push_back({"synthetic:" + std::to_string(seed + i),
                   synthetic_scene(spec.height, spec.width, seed + i)});
  }
  return out;
}

std::vector<DatasetEntry> make_dataset(const std::vector<SourceImage>& sources,
                                       const SyntheticSources& synthetic,
                                       const Protocol& protocol, std::uint64_t seed) {
  if (protocol.tile_size == 0) throw Error(ErrorCode::InvalidArgument, "tile size must be positive");
  if (protocol.kind == ProtocolKind::Nonideal && protocol.tile_size % 10 != 0) {
    throw Error(ErrorCode::InvalidArgument, "nonideal tiles must be multiples of 10");
  }
  if (protocol.kind == ProtocolKind::Ideal && protocol.tile_size % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "ideal tiles must have even size");
  }
  const Kernel kernel = gaussian_kernel(protocol.kernel_size, protocol.kernel_variance);

  std::vector<SourceImage> all = sources;
  for (auto& s : synthetic_sources(synthetic, seed)) all.push_back(std::move(s));

  std::vector<DatasetEntry> entries;
  const std::size_t t = protocol.tile_size;
  for (const auto& src : all) {
    const std::size_t rows = src.image.height() / t;
    const std::size_t cols = src.image.width() / t;
    for (std::size_t tr = 0; tr < rows; ++tr) {
      for (std::size_t tc = 0; tc < cols; ++tc) {
        DatasetEntry e;
        char id[32];
        std::snprintf(id, sizeof id, "tile_%04zu", entries.size());
        e.tile_id = id;
        e.source = src.name;
        e.tile_row = tr;
        e.tile_col = tc;
        e.protocol = protocol;
        const Image tile = crop(src.image, tr * t, tc * t, t, t);
        e.pair = protocol.kind == ProtocolKind::Ideal
                     ? simulate_ideal(tile, kernel)
                     : simulate_nonideal(tile, protocol.shift_n, protocol.shift_n, kernel);
        e.pair.validate();
        entries.push_back(std::move(e));
      }
    }
  }
  return entries;
}

}  // namespace tisr
