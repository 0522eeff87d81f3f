#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uar/tensor.hpp"

namespace uar {

// One source/target pair. Both images share the spatial size and live in
// [0,1].
struct PairedSample {
  Image x_a;
  Image x_b;
  std::string id;
};

// Synthetic pair plus the injected per-pixel noise variance, the ground
// truth for uncertainty validation.
struct SyntheticTruth {
  PairedSample sample;
  Map2 noise_variance;
};

struct LoadReport {
  std::vector<PairedSample> samples;   // sorted by basename
  std::vector<std::string> orphans;    // files without a counterpart
};

// Loads a paired directory with subfolders A/ and B/ holding files with
// identical basenames. Orphans are reported, not fatal. Images decode to
// [0,1] regardless of source bit depth.
LoadReport load_paired_dir(const std::filesystem::path& root);

struct SplitResult {
  std::vector<PairedSample> train, val, test;
};

// Deterministic seeded shuffle + partition. Fractions must be nonnegative
// and sum to 1; counts use cumulative rounding so the split is exhaustive.
SplitResult split(const std::vector<PairedSample>& samples, const std::array<double, 3>& fractions,
                  std::uint64_t seed);

// ---------------------------------------------------------------------
// Synthetic paired generator. The target transform and the noise field
// are fixed repository constants:
//
//   x_a      = per-channel smooth cosine field + random disks/rectangles,
//              clipped to [0.05, 0.95]
//   T(x_a)   = row-stochastic 3x3 channel mix, per-channel gamma
//              (0.8, 1.0, 1.25), then affine squeeze into [0.15, 0.85]
//   V(x_a)   = 1e-5 + (9e-4 - 1e-5) * smoothstep of the box-blurred
//              channel-mean intensity (bright regions are noisy)
//   x_b      = clamp01(T(x_a) + n),  n ~ N(0, V(x_a)) iid per channel
//
// The squeeze margin keeps clipping a >= 5-sigma event, so the empirical
// variance of x_b - T(x_a) matches V.
// ---------------------------------------------------------------------

// Deterministic single sample from explicit content/noise streams.
SyntheticTruth make_synthetic_sample(std::uint64_t content_seed, std::uint64_t noise_seed,
                                     int size);

// n samples, seeds derived from (seed, index). Deterministic.
std::vector<SyntheticTruth> generate_synthetic(int n, int size, std::uint64_t seed);

// The fixed invertible channel-mixing transform T.
Image synthetic_transform(const Image& x_a);

// The noise-variance field V derived from the source image.
Map2 synthetic_noise_field(const Image& x_a);

// ---------------------------------------------------------------------
// Portable float-map format: one text header line
//   {"h":H,"w":W,"dtype":"f32"}\n
// followed by H*W little-endian float32 values in row-major order.
// export also writes an 8-bit viridis-mapped preview at <path>.png.
// ---------------------------------------------------------------------
void export_float_map(const Map2& map, const std::filesystem::path& path);
Map2 import_float_map(const std::filesystem::path& path);

// PNG helpers (via OpenCV). Images clamp to [0,1] on write.
void save_image_png(const Image& img, const std::filesystem::path& path);
Image load_image(const std::filesystem::path& path);

// 8-bit viridis preview of a scalar map, normalized to [min, max]
// (uniform color for constant maps).
void save_map_preview(const Map2& map, const std::filesystem::path& path);

// Writes a synthetic dataset to dir/A, dir/B plus truth variance maps
// under dir/truth and a manifest.json. Layout matches load_paired_dir.
void write_synthetic_dataset(const std::vector<SyntheticTruth>& data,
                             const std::filesystem::path& dir);

}  // namespace uar
