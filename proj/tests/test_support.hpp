#pragma once

#include <cmath>
#include <functional>

#include "uar/rng.hpp"
#include "uar/tensor.hpp"

namespace uar::testing {

// Central finite difference, the independent oracle for every gradient
// check in this suite.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double step = 1e-5) {
  return (f(x + step) - f(x - step)) / (2.0 * step);
}

inline double rel_err(double got, double want) {
  const double denom = std::max(std::abs(want), 1e-12);
  return std::abs(got - want) / denom;
}

// Relative error with an absolute floor, for gradients that pass near 0.
inline double grad_err(double got, double want) {
  const double scale = std::max({std::abs(got), std::abs(want), 1e-6});
  return std::abs(got - want) / scale;
}

inline Map2 random_map(int rows, int cols, double lo, double hi, Rng& rng) {
  Map2 m(rows, cols);
  for (double& x : m.v) x = rng.uniform(lo, hi);
  return m;
}

inline Image random_image(int rows, int cols, int channels, double lo, double hi, Rng& rng) {
  Image img(rows, cols, channels);
  for (double& x : img.v) x = rng.uniform(lo, hi);
  return img;
}

}  // namespace uar::testing
