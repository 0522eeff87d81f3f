#include "uar/corruptions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uar/rng.hpp"

namespace uar {

CorruptionKind corruption_kind_from_string(const std::string& s) {
  if (s == "gaussian") return CorruptionKind::kGaussian;
  if (s == "uniform") return CorruptionKind::kUniform;
  if (s == "impulse") return CorruptionKind::kImpulse;
  if (s == "disk") return CorruptionKind::kDisk;
  if (s == "ring") return CorruptionKind::kRing;
  throw std::invalid_argument("unknown corruption kind: " + s);
}

std::string to_string(CorruptionKind kind) {
  switch (kind) {
    case CorruptionKind::kGaussian: return "gaussian";
    case CorruptionKind::kUniform: return "uniform";
    case CorruptionKind::kImpulse: return "impulse";
    case CorruptionKind::kDisk: return "disk";
    case CorruptionKind::kRing: return "ring";
  }
  throw std::logic_error("bad CorruptionKind");
}

CorruptionSpec CorruptionSpec::gaussian(double variance, std::uint64_t seed) {
  CorruptionSpec s;
  s.kind = CorruptionKind::kGaussian;
  s.variance = variance;
  s.seed = seed;
  return s;
}

CorruptionSpec CorruptionSpec::uniform(double low, double high, std::uint64_t seed) {
  CorruptionSpec s;
  s.kind = CorruptionKind::kUniform;
  s.low = low;
  s.high = high;
  s.seed = seed;
  return s;
}

CorruptionSpec CorruptionSpec::impulse(double probability, std::uint64_t seed) {
  CorruptionSpec s;
  s.kind = CorruptionKind::kImpulse;
  s.probability = probability;
  s.seed = seed;
  return s;
}

CorruptionSpec CorruptionSpec::disk(double center_row, double center_col, double radius,
                                    double fill) {
  CorruptionSpec s;
  s.kind = CorruptionKind::kDisk;
  s.center_row = center_row;
  s.center_col = center_col;
  s.radius = radius;
  s.fill = fill;
  return s;
}

CorruptionSpec CorruptionSpec::ring(double center_row, double center_col, double inner_radius,
                                    double outer_radius, double fill) {
  CorruptionSpec s;
  s.kind = CorruptionKind::kRing;
  s.center_row = center_row;
  s.center_col = center_col;
  s.inner_radius = inner_radius;
  s.outer_radius = outer_radius;
  s.fill = fill;
  return s;
}

void validate(const CorruptionSpec& spec) {
  switch (spec.kind) {
    case CorruptionKind::kGaussian:
      if (!(spec.variance >= 0.0) || !std::isfinite(spec.variance))
        throw std::domain_error("gaussian corruption: variance must be >= 0");
      break;
    case CorruptionKind::kUniform:
      if (!(spec.low <= spec.high) || !std::isfinite(spec.low) || !std::isfinite(spec.high))
        throw std::domain_error("uniform corruption: requires low <= high");
      break;
    case CorruptionKind::kImpulse:
      if (!(spec.probability >= 0.0 && spec.probability <= 1.0))
        throw std::domain_error("impulse corruption: p must be in [0,1]");
      break;
    case CorruptionKind::kDisk:
      if (!(spec.radius >= 0.0)) throw std::domain_error("disk corruption: radius must be >= 0");
      if (!(spec.fill >= 0.0 && spec.fill <= 1.0))
        throw std::domain_error("disk corruption: fill must be in [0,1]");
      break;
    case CorruptionKind::kRing:
      if (!(spec.inner_radius >= 0.0 && spec.inner_radius < spec.outer_radius))
        throw std::domain_error("ring corruption: requires 0 <= inner < outer");
      if (!(spec.fill >= 0.0 && spec.fill <= 1.0))
        throw std::domain_error("ring corruption: fill must be in [0,1]");
      break;
  }
}

namespace {

inline double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

Image corrupt(const Image& x, const CorruptionSpec& spec) {
  validate(spec);
  Image out = x;
  switch (spec.kind) {
    case CorruptionKind::kGaussian: {
      if (spec.variance == 0.0) return out;
      Rng rng(spec.seed);
      const double stddev = std::sqrt(spec.variance);
      for (double& p : out.v) p = clamp01(p + rng.normal(0.0, stddev));
      break;
    }
    case CorruptionKind::kUniform: {
      if (spec.low == 0.0 && spec.high == 0.0) return out;
      Rng rng(spec.seed);
      for (double& p : out.v) p = clamp01(p + rng.uniform(spec.low, spec.high));
      break;
    }
    case CorruptionKind::kImpulse: {
      if (spec.probability == 0.0) return out;
      Rng rng(spec.seed);
      for (int r = 0; r < out.rows; ++r)
        for (int c = 0; c < out.cols; ++c) {
          if (!rng.bernoulli(spec.probability)) continue;
          const double value = rng.bernoulli(0.5) ? 1.0 : 0.0;
          for (int ch = 0; ch < out.channels; ++ch) out.at(ch, r, c) = value;
        }
      break;
    }
    case CorruptionKind::kDisk:
    case CorruptionKind::kRing: {
      const Mask mask = corruption_mask(spec, x.rows, x.cols);
      for (int r = 0; r < out.rows; ++r)
        for (int c = 0; c < out.cols; ++c) {
          if (!mask.at(r, c)) continue;
          for (int ch = 0; ch < out.channels; ++ch) out.at(ch, r, c) = spec.fill;
        }
      break;
    }
  }
  return out;
}

Mask corruption_mask(const CorruptionSpec& spec, int rows, int cols) {
  validate(spec);
  if (spec.kind != CorruptionKind::kDisk && spec.kind != CorruptionKind::kRing)
    throw std::invalid_argument("corruption_mask: only disk/ring specs have masks");

  Mask mask(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const double dr = r - spec.center_row;
      const double dc = c - spec.center_col;
      const double dist = std::sqrt(dr * dr + dc * dc);
      bool inside = false;
      if (spec.kind == CorruptionKind::kDisk)
        inside = spec.radius > 0.0 && dist <= spec.radius;
      else
        inside = dist >= spec.inner_radius && dist <= spec.outer_radius;
      mask.at(r, c) = inside ? 1 : 0;
    }
  return mask;
}

}  // namespace uar
