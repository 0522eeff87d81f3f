#pragma once

#include <cmath>

namespace uar {

// Digamma via upward recurrence into the asymptotic region, then the
// standard asymptotic series. Accurate to ~1e-12 for x > 0.
inline double digamma(double x) {
  double result = 0.0;
  while (x < 6.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double inv4 = inv2 * inv2;
  const double inv6 = inv4 * inv2;
  result += std::log(x) - 0.5 * inv - (1.0 / 12.0) * inv2 + (1.0 / 120.0) * inv4 -
            (1.0 / 252.0) * inv6 + (1.0 / 240.0) * inv6 * inv2;
  return result;
}

// log Gamma. std::lgamma is not required to be thread-safe because of
// signgam; our arguments are always positive so the value itself is fine,
// but wrap it so call sites stay uniform.
inline double log_gamma(double x) { return std::lgamma(x); }

}  // namespace uar
