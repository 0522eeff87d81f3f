#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace uar {

// Row-major H x W grid of doubles. Used for alpha/beta/variance maps and
// all scalar per-pixel quantities.
struct Map2 {
  int rows = 0;
  int cols = 0;
  std::vector<double> v;

  Map2() = default;
  Map2(int r, int c, double fill = 0.0) : rows(r), cols(c), v(static_cast<std::size_t>(r) * c, fill) {
    if (r < 0 || c < 0) throw std::invalid_argument("Map2: negative dimensions");
  }

  double& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return v[static_cast<std::size_t>(r) * cols + c]; }
  std::size_t size() const { return v.size(); }
  bool same_shape(const Map2& o) const { return rows == o.rows && cols == o.cols; }
};

// Planar H x W x C image, channel-major: v[(ch*rows + r)*cols + c].
// Image intensities live in [0,1]; residuals are signed.
struct Image {
  int rows = 0;
  int cols = 0;
  int channels = 0;
  std::vector<double> v;

  Image() = default;
  Image(int r, int c, int ch, double fill = 0.0)
      : rows(r), cols(c), channels(ch), v(static_cast<std::size_t>(r) * c * ch, fill) {
    if (r < 0 || c < 0 || ch <= 0) throw std::invalid_argument("Image: bad dimensions");
  }

  double& at(int ch, int r, int c) {
    return v[(static_cast<std::size_t>(ch) * rows + r) * cols + c];
  }
  double at(int ch, int r, int c) const {
    return v[(static_cast<std::size_t>(ch) * rows + r) * cols + c];
  }
  std::size_t size() const { return v.size(); }
  bool same_shape(const Image& o) const {
    return rows == o.rows && cols == o.cols && channels == o.channels;
  }
};

inline bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

inline void require_same_shape(const Map2& a, const Map2& b, const std::string& where) {
  if (!a.same_shape(b)) throw std::invalid_argument(where + ": shape mismatch");
}

inline void require_same_shape(const Image& a, const Image& b, const std::string& where) {
  if (!a.same_shape(b)) throw std::invalid_argument(where + ": shape mismatch");
}

}  // namespace uar
