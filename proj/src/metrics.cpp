#include "uar/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace uar {

double psnr(const Image& x, const Image& x_hat, double peak) {
  require_same_shape(x, x_hat, "psnr");
  double mse = 0.0;
  for (std::size_t i = 0; i < x.v.size(); ++i) {
    const double d = x_hat.v[i] - x.v[i];
    mse += d * d;
  }
  mse /= static_cast<double>(x.v.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

std::vector<double> ssim_kernel() {
  std::vector<double> k(kSsimWindow);
  const int half = kSsimWindow / 2;
  double sum = 0.0;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double d = i - half;
    k[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable valid-mode filtering of one channel plane.
Map2 filter_valid(const Map2& img, const std::vector<double>& k) {
  const int n = static_cast<int>(k.size());
  Map2 tmp(img.rows, img.cols - n + 1);
  for (int r = 0; r < img.rows; ++r)
    for (int c = 0; c < tmp.cols; ++c) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += k[i] * img.at(r, c + i);
      tmp.at(r, c) = acc;
    }
  Map2 out(img.rows - n + 1, tmp.cols);
  for (int r = 0; r < out.rows; ++r)
    for (int c = 0; c < out.cols; ++c) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += k[i] * tmp.at(r + i, c);
      out.at(r, c) = acc;
    }
  return out;
}

double ssim_channel(const Map2& a, const Map2& b, const std::vector<double>& k) {
  Map2 a2(a.rows, a.cols), b2(a.rows, a.cols), ab(a.rows, a.cols);
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    a2.v[i] = a.v[i] * a.v[i];
    b2.v[i] = b.v[i] * b.v[i];
    ab.v[i] = a.v[i] * b.v[i];
  }
  const Map2 mu_a = filter_valid(a, k);
  const Map2 mu_b = filter_valid(b, k);
  const Map2 m_a2 = filter_valid(a2, k);
  const Map2 m_b2 = filter_valid(b2, k);
  const Map2 m_ab = filter_valid(ab, k);

  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.v.size(); ++i) {
    const double ma = mu_a.v[i], mb = mu_b.v[i];
    const double va = m_a2.v[i] - ma * ma;
    const double vb = m_b2.v[i] - mb * mb;
    const double cov = m_ab.v[i] - ma * mb;
    total += ((2.0 * ma * mb + kC1) * (2.0 * cov + kC2)) /
             ((ma * ma + mb * mb + kC1) * (va + vb + kC2));
  }
  return total / static_cast<double>(mu_a.v.size());
}

}  // namespace

double ssim(const Image& x, const Image& x_hat) {
  require_same_shape(x, x_hat, "ssim");
  if (x.rows < kSsimWindow || x.cols < kSsimWindow)
    throw std::domain_error("ssim: image smaller than the 11x11 window");

  const std::vector<double> k = ssim_kernel();
  double total = 0.0;
  for (int ch = 0; ch < x.channels; ++ch) {
    Map2 a(x.rows, x.cols), b(x.rows, x.cols);
    for (int r = 0; r < x.rows; ++r)
      for (int c = 0; c < x.cols; ++c) {
        a.at(r, c) = x.at(ch, r, c);
        b.at(r, c) = x_hat.at(ch, r, c);
      }
    total += ssim_channel(a, b, k);
  }
  return total / x.channels;
}

double rrmse(const Image& x, const Image& x_hat) {
  require_same_shape(x, x_hat, "rrmse");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.v.size(); ++i) {
    const double d = x_hat.v[i] - x.v[i];
    num += d * d;
    den += x.v[i] * x.v[i];
  }
  if (den == 0.0) throw std::domain_error("rrmse: reference image has zero norm");
  return std::sqrt(num / den);
}

std::optional<double> perceptual_distance(const Image& x, const Image& x_hat,
                                          PerceptualBackend* backend) {
  if (backend == nullptr) return std::nullopt;
  require_same_shape(x, x_hat, "perceptual_distance");
  return backend->distance(x, x_hat);
}

}  // namespace uar
