#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tisr/degradation.hpp"

namespace tisr {

/// A simulated (or observed) twin observation with its metadata.
struct TwinPair {
  Image y1;
  Image y2;
  double true_shift_x = 0.5;  // LR pixels
  double true_shift_y = 0.5;
  std::optional<Image> ground_truth;
  DegradationModel model;

  StackedObservation observation() const { return {y1, y2}; }
  /// Throws if the pair violates its invariants.
  void validate() const;
};

/// Ideal half-pixel twins: y1 = D B z, y2 = D B S z with S = shift(., 1, 1).
TwinPair simulate_ideal(const Image& z, const Kernel& kernel = gaussian_kernel(7, 0.65));

/// Block-mean downsampling.
Image downsample_avg(const Image& img, std::size_t factor);

/// Nonideal twins from an original-resolution image: z is the 5x block mean,
/// y1 the 10x block mean of the blurred original, and y2 the same chain
/// applied to the original shifted by (shift_rows_n, shift_cols_n) original
/// pixels, i.e. 0.1 LR pixel per step.
TwinPair simulate_nonideal(const Image& original, int shift_rows_n, int shift_cols_n,
                           const Kernel& kernel = gaussian_kernel(7, 0.65));
inline TwinPair simulate_nonideal(const Image& original, int shift_n) {
  return simulate_nonideal(original, shift_n, shift_n);
}

/// Deterministic synthetic scene in [0,1]: smooth 1/f background, rectangular
/// structures, linear features and fine texture.
Image synthetic_scene(std::size_t height, std::size_t width, std::uint64_t seed);

enum class ProtocolKind { Ideal, Nonideal };

const char* to_string(ProtocolKind kind);
ProtocolKind parse_protocol(const std::string& name);

struct Protocol {
  ProtocolKind kind = ProtocolKind::Ideal;
  /// Tile edge in source pixels (HR for ideal, original for nonideal).
  std::size_t tile_size = 512;
  int shift_n = 5;  // nonideal only
  double kernel_variance = 0.65;
  std::size_t kernel_size = 7;
};

struct SourceImage {
  std::string name;
  Image image;
};

struct SyntheticSources {
  std::size_t count = 0;
  std::size_t height = 0;
  std::size_t width = 0;
};

/// Synthetic scene `index` uses seed `seed + index`.
std::vector<SourceImage> synthetic_sources(const SyntheticSources& spec,
                                           std::uint64_t seed);

struct DatasetEntry {
  std::string tile_id;
  std::string source;
  std::size_t tile_row = 0;
  std::size_t tile_col = 0;
  Protocol protocol;
  TwinPair pair;
};

/// Crops every source into nonoverlapping tiles (row-major, top-left
/// aligned) and simulates a twin pair for each. `synthetic` scenes, generated
/// from `seed`, are appended after the explicit sources.
std::vector<DatasetEntry> make_dataset(const std::vector<SourceImage>& sources,
                                       const SyntheticSources& synthetic,
                                       const Protocol& protocol, std::uint64_t seed);

}  // namespace tisr
