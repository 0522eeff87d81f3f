#pragma once

#include <string>

#include "uar/tensor.hpp"

namespace uar {

inline constexpr int kDefaultActivationEpoch = 5;
inline constexpr double kDefaultTvEpsilon = 1e-7;

enum class RegKind { kTvIso, kGradL2Sq, kTvAniso };

// Variation penalty on the predicted shape-parameter map. Boundary
// handling is fixed to replicate: the forward difference is zero on the
// last row/column, so the sum runs over all H*W pixels.
struct RegularizerSpec {
  RegKind kind = RegKind::kTvIso;
  double epsilon = kDefaultTvEpsilon;
};

RegKind reg_kind_from_string(const std::string& s);
std::string to_string(RegKind kind);

// tv_iso:    sum sqrt(eps^2 + dx^2 + dy^2)
// grad_l2sq: sum (dx^2 + dy^2)
// tv_aniso:  sum (|dx| + |dy|)
// dx, dy are forward differences with replicate boundary.
double penalty(const Map2& beta_map, const RegularizerSpec& spec);

// Gradient of penalty() w.r.t. the map. Non-smooth terms (tv_aniso at a
// zero difference, tv_iso with eps = 0 at a locally constant pixel) use
// the subgradient 0.
Map2 penalty_gradient(const Map2& beta_map, const RegularizerSpec& spec);

// True once the given epoch has reached the activation epoch.
bool regularizer_active(int epoch, int activation_epoch = kDefaultActivationEpoch);

}  // namespace uar
