#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace uar::net {

// Dense NCHW activation/feature tensor.
template <class T>
struct Tensor4 {
  int n = 0, c = 0, h = 0, w = 0;
  std::vector<T> v;

  Tensor4() = default;
  Tensor4(int n_, int c_, int h_, int w_, T fill = T(0))
      : n(n_), c(c_), h(h_), w(w_), v(static_cast<std::size_t>(n_) * c_ * h_ * w_, fill) {}

  T& at(int i, int ch, int y, int x) {
    return v[((static_cast<std::size_t>(i) * c + ch) * h + y) * w + x];
  }
  T at(int i, int ch, int y, int x) const {
    return v[((static_cast<std::size_t>(i) * c + ch) * h + y) * w + x];
  }

  std::size_t sample_size() const { return static_cast<std::size_t>(c) * h * w; }
  T* sample(int i) { return v.data() + i * sample_size(); }
  const T* sample(int i) const { return v.data() + i * sample_size(); }

  bool same_shape(const Tensor4& o) const {
    return n == o.n && c == o.c && h == o.h && w == o.w;
  }
};

template <class T>
Tensor4<T> concat_channels(const Tensor4<T>& a, const Tensor4<T>& b) {
  if (a.n != b.n || a.h != b.h || a.w != b.w)
    throw std::invalid_argument("concat_channels: shape mismatch");
  Tensor4<T> out(a.n, a.c + b.c, a.h, a.w);
  const std::size_t plane_a = static_cast<std::size_t>(a.c) * a.h * a.w;
  const std::size_t plane_b = static_cast<std::size_t>(b.c) * b.h * b.w;
  for (int i = 0; i < a.n; ++i) {
    T* dst = out.sample(i);
    std::copy(a.sample(i), a.sample(i) + plane_a, dst);
    std::copy(b.sample(i), b.sample(i) + plane_b, dst + plane_a);
  }
  return out;
}

// Inverse of concat_channels for gradients.
template <class T>
std::pair<Tensor4<T>, Tensor4<T>> split_channels(const Tensor4<T>& d, int c_first) {
  Tensor4<T> da(d.n, c_first, d.h, d.w);
  Tensor4<T> db(d.n, d.c - c_first, d.h, d.w);
  const std::size_t plane_a = da.sample_size();
  const std::size_t plane_b = db.sample_size();
  for (int i = 0; i < d.n; ++i) {
    std::copy(d.sample(i), d.sample(i) + plane_a, da.sample(i));
    std::copy(d.sample(i) + plane_a, d.sample(i) + plane_a + plane_b, db.sample(i));
  }
  return {std::move(da), std::move(db)};
}

}  // namespace uar::net
