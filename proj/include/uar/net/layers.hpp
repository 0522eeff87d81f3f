#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "uar/net/gemm.hpp"
#include "uar/net/tensor4.hpp"
#include "uar/rng.hpp"

namespace uar::net {

template <class T>
struct ParamView {
  T* values = nullptr;
  T* grads = nullptr;
  std::size_t size = 0;
};

// im2col for one sample: output is (in_c*k*k) x (oh*ow), row-major.
template <class T>
void im2col(const T* src, int in_c, int h, int w, int k, int stride, int pad, int oh, int ow,
            T* cols) {
  for (int c = 0; c < in_c; ++c)
    for (int ky = 0; ky < k; ++ky)
      for (int kx = 0; kx < k; ++kx) {
        T* row = cols + ((static_cast<std::size_t>(c) * k + ky) * k + kx) *
                            (static_cast<std::size_t>(oh) * ow);
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * stride + ky - pad;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * stride + kx - pad;
            row[static_cast<std::size_t>(oy) * ow + ox] =
                (iy >= 0 && iy < h && ix >= 0 && ix < w)
                    ? src[(static_cast<std::size_t>(c) * h + iy) * w + ix]
                    : T(0);
          }
        }
      }
}

template <class T>
void col2im(const T* cols, int in_c, int h, int w, int k, int stride, int pad, int oh, int ow,
            T* dst) {
  for (int c = 0; c < in_c; ++c)
    for (int ky = 0; ky < k; ++ky)
      for (int kx = 0; kx < k; ++kx) {
        const T* row = cols + ((static_cast<std::size_t>(c) * k + ky) * k + kx) *
                                  (static_cast<std::size_t>(oh) * ow);
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * stride + ky - pad;
          if (iy < 0 || iy >= h) continue;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * stride + kx - pad;
            if (ix < 0 || ix >= w) continue;
            dst[(static_cast<std::size_t>(c) * h + iy) * w + ix] +=
                row[static_cast<std::size_t>(oy) * ow + ox];
          }
        }
      }
}

// 2D convolution, square kernel, zero padding. Caches its input between
// forward and backward; one backward per forward.
template <class T>
class Conv2d {
 public:
  Conv2d(int in_c, int out_c, int k, int stride, int pad)
      : in_c_(in_c), out_c_(out_c), k_(k), stride_(stride), pad_(pad),
        w_(static_cast<std::size_t>(out_c) * in_c * k * k),
        b_(out_c), dw_(w_.size(), T(0)), db_(out_c, T(0)) {}

  // He-uniform over fan-in; biases zero.
  void init(Rng& rng) {
    const double limit = std::sqrt(6.0 / (static_cast<double>(in_c_) * k_ * k_));
    for (T& x : w_) x = static_cast<T>(rng.uniform(-limit, limit));
    for (T& x : b_) x = T(0);
  }

  int out_size(int in) const { return (in + 2 * pad_ - k_) / stride_ + 1; }

  Tensor4<T> forward(const Tensor4<T>& x) {
    if (x.c != in_c_) throw std::invalid_argument("Conv2d: channel mismatch");
    input_ = x;
    const int oh = out_size(x.h), ow = out_size(x.w);
    if (oh <= 0 || ow <= 0) throw std::invalid_argument("Conv2d: output collapsed to zero size");
    Tensor4<T> y(x.n, out_c_, oh, ow);
    const int patch = in_c_ * k_ * k_;
    cols_.resize(static_cast<std::size_t>(patch) * oh * ow);
    for (int i = 0; i < x.n; ++i) {
      im2col(x.sample(i), in_c_, x.h, x.w, k_, stride_, pad_, oh, ow, cols_.data());
      gemm(false, false, out_c_, oh * ow, patch, T(1), w_.data(), patch, cols_.data(), oh * ow,
           T(0), y.sample(i), oh * ow);
      for (int oc = 0; oc < out_c_; ++oc) {
        T* plane = y.sample(i) + static_cast<std::size_t>(oc) * oh * ow;
        for (int p = 0; p < oh * ow; ++p) plane[p] += b_[oc];
      }
    }
    return y;
  }

  // Accumulates dw_/db_ and returns the input gradient.
  Tensor4<T> backward(const Tensor4<T>& dy) {
    const int oh = dy.h, ow = dy.w;
    const int patch = in_c_ * k_ * k_;
    Tensor4<T> dx(input_.n, in_c_, input_.h, input_.w, T(0));
    std::vector<T> dcols(static_cast<std::size_t>(patch) * oh * ow);
    for (int i = 0; i < input_.n; ++i) {
      im2col(input_.sample(i), in_c_, input_.h, input_.w, k_, stride_, pad_, oh, ow, cols_.data());
      // dW += dy * cols^T
      gemm(false, true, out_c_, patch, oh * ow, T(1), dy.sample(i), oh * ow, cols_.data(), oh * ow,
           T(1), dw_.data(), patch);
      for (int oc = 0; oc < out_c_; ++oc) {
        const T* plane = dy.sample(i) + static_cast<std::size_t>(oc) * oh * ow;
        T acc = T(0);
        for (int p = 0; p < oh * ow; ++p) acc += plane[p];
        db_[oc] += acc;
      }
      // dcols = W^T * dy
      gemm(true, false, patch, oh * ow, out_c_, T(1), w_.data(), patch, dy.sample(i), oh * ow,
           T(0), dcols.data(), oh * ow);
      col2im(dcols.data(), in_c_, input_.h, input_.w, k_, stride_, pad_, oh, ow, dx.sample(i));
    }
    return dx;
  }

  void zero_grad() {
    std::fill(dw_.begin(), dw_.end(), T(0));
    std::fill(db_.begin(), db_.end(), T(0));
  }

  std::vector<ParamView<T>> params() {
    return {{w_.data(), dw_.data(), w_.size()}, {b_.data(), db_.data(), b_.size()}};
  }

  std::vector<T>& weights() { return w_; }
  std::vector<T>& biases() { return b_; }

 private:
  int in_c_, out_c_, k_, stride_, pad_;
  std::vector<T> w_, b_, dw_, db_;
  std::vector<T> cols_;
  Tensor4<T> input_;
};

template <class T>
class LeakyRelu {
 public:
  explicit LeakyRelu(double slope = 0.2) : slope_(static_cast<T>(slope)) {}

  Tensor4<T> forward(const Tensor4<T>& x) {
    mask_.resize(x.v.size());
    Tensor4<T> y = x;
    for (std::size_t i = 0; i < y.v.size(); ++i) {
      mask_[i] = y.v[i] > T(0);
      if (!mask_[i]) y.v[i] *= slope_;
    }
    return y;
  }

  Tensor4<T> backward(const Tensor4<T>& dy) {
    Tensor4<T> dx = dy;
    for (std::size_t i = 0; i < dx.v.size(); ++i)
      if (!mask_[i]) dx.v[i] *= slope_;
    return dx;
  }

 private:
  T slope_;
  std::vector<std::uint8_t> mask_;
};

template <class T>
Tensor4<T> upsample2x(const Tensor4<T>& x) {
  Tensor4<T> y(x.n, x.c, x.h * 2, x.w * 2);
  for (int i = 0; i < x.n; ++i)
    for (int c = 0; c < x.c; ++c)
      for (int ys = 0; ys < y.h; ++ys)
        for (int xs = 0; xs < y.w; ++xs) y.at(i, c, ys, xs) = x.at(i, c, ys / 2, xs / 2);
  return y;
}

template <class T>
Tensor4<T> upsample2x_backward(const Tensor4<T>& dy) {
  Tensor4<T> dx(dy.n, dy.c, dy.h / 2, dy.w / 2, T(0));
  for (int i = 0; i < dy.n; ++i)
    for (int c = 0; c < dy.c; ++c)
      for (int ys = 0; ys < dy.h; ++ys)
        for (int xs = 0; xs < dy.w; ++xs) dx.at(i, c, ys / 2, xs / 2) += dy.at(i, c, ys, xs);
  return dx;
}

// Mean over the spatial extent, per sample and channel.
template <class T>
std::vector<double> global_avg_pool(const Tensor4<T>& x) {
  std::vector<double> out(static_cast<std::size_t>(x.n) * x.c, 0.0);
  const double inv = 1.0 / (static_cast<double>(x.h) * x.w);
  for (int i = 0; i < x.n; ++i)
    for (int c = 0; c < x.c; ++c) {
      double acc = 0.0;
      for (int y = 0; y < x.h; ++y)
        for (int xx = 0; xx < x.w; ++xx) acc += x.at(i, c, y, xx);
      out[static_cast<std::size_t>(i) * x.c + c] = acc * inv;
    }
  return out;
}

template <class T>
Tensor4<T> global_avg_pool_backward(const std::vector<double>& d_pooled, int n, int c, int h,
                                    int w) {
  Tensor4<T> dx(n, c, h, w);
  const double inv = 1.0 / (static_cast<double>(h) * w);
  for (int i = 0; i < n; ++i)
    for (int ch = 0; ch < c; ++ch) {
      const T g = static_cast<T>(d_pooled[static_cast<std::size_t>(i) * c + ch] * inv);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) dx.at(i, ch, y, x) = g;
    }
  return dx;
}

inline double stable_softplus(double x) {
  if (x > 20.0) return x;
  if (x < -20.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace uar::net
