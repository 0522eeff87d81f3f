#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uar/tensor.hpp"

namespace uar {

enum class CorruptionKind { kGaussian, kUniform, kImpulse, kDisk, kRing };

CorruptionKind corruption_kind_from_string(const std::string& s);
std::string to_string(CorruptionKind kind);

// Declarative noise/artifact injection. Noise parameters assume images
// in [0,1]. Only the fields of the active kind are read.
struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::kGaussian;
  double variance = 0.0;             // gaussian: additive N(0, variance)
  double low = 0.0, high = 0.0;      // uniform: additive U(low, high)
  double probability = 0.0;          // impulse: per-pixel corruption probability
  double center_row = 0.0, center_col = 0.0;
  double radius = 0.0;               // disk
  double inner_radius = 0.0, outer_radius = 0.0;  // ring
  double fill = 0.0;                 // disk/ring fill intensity in [0,1]
  std::uint64_t seed = 0;

  static CorruptionSpec gaussian(double variance, std::uint64_t seed);
  static CorruptionSpec uniform(double low, double high, std::uint64_t seed);
  static CorruptionSpec impulse(double probability, std::uint64_t seed);
  static CorruptionSpec disk(double center_row, double center_col, double radius, double fill);
  static CorruptionSpec ring(double center_row, double center_col, double inner_radius,
                             double outer_radius, double fill);
};

void validate(const CorruptionSpec& spec);

struct Mask {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> v;

  Mask() = default;
  Mask(int r, int c) : rows(r), cols(c), v(static_cast<std::size_t>(r) * c, 0) {}
  std::uint8_t& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
  std::uint8_t at(int r, int c) const { return v[static_cast<std::size_t>(r) * cols + c]; }
};

// Applies the corruption to a copy of x; output clamped to [0,1], same
// shape, deterministic given spec.seed. Impulse corrupts whole pixels
// (all channels set to 0 or 1, salt/pepper equiprobable). Disk and ring
// overwrite the masked region with the fill intensity on every channel.
Image corrupt(const Image& x, const CorruptionSpec& spec);

// Ground-truth artifact region. Pixel centers at integer coordinates;
// disk: dist <= radius (empty for radius 0), ring: inner <= dist <= outer.
// Only valid for disk/ring specs.
Mask corruption_mask(const CorruptionSpec& spec, int rows, int cols);

}  // namespace uar
