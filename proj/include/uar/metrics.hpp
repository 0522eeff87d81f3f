#pragma once

#include <optional>
#include <string>

#include "uar/tensor.hpp"

namespace uar {

// Aggregated reconstruction-quality metrics over an evaluation set.
// lpips is present only when a perceptual backend was registered.
struct MetricReport {
  double ssim = 0.0;
  double psnr = 0.0;  // dB; +inf sentinel when every MSE was zero
  double rrmse = 0.0;
  std::optional<double> lpips;
  int n_images = 0;
};

// 10*log10(peak^2 / MSE); +inf when MSE == 0.
double psnr(const Image& x, const Image& x_hat, double peak = 1.0);

// Structural similarity: 11x11 Gaussian window (sigma 1.5), stability
// constants C1=(0.01)^2, C2=(0.03)^2 for unit peak, valid windows only,
// computed per channel and averaged. Requires min(H, W) >= 11.
double ssim(const Image& x, const Image& x_hat);

// ||x_hat - x||_2 / ||x||_2 over all elements; the reference must have
// nonzero norm.
double rrmse(const Image& x, const Image& x_hat);

// External pretrained feature-space distance (LPIPS-compatible slot).
class PerceptualBackend {
 public:
  virtual ~PerceptualBackend() = default;
  virtual double distance(const Image& x, const Image& x_hat) = 0;
  virtual std::string name() const = 0;
};

// nullopt when no backend is given: the metric is reported unavailable,
// never an error.
std::optional<double> perceptual_distance(const Image& x, const Image& x_hat,
                                          PerceptualBackend* backend);

}  // namespace uar
