#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "uar/net/layers.hpp"

namespace uar::net {

// Adaptive-moment optimizer with the standard published coefficients
// (beta1 0.9, beta2 0.999, eps 1e-8) and bias correction. State is keyed
// by parameter order, which must be stable across steps.
template <class T>
class Adam {
 public:
  Adam(double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(const std::vector<ParamView<T>>& params, double lr) {
    if (m_.empty()) {
      std::size_t total = 0;
      for (const auto& p : params) total += p.size;
      m_.assign(total, 0.0);
      v_.assign(total, 0.0);
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    std::size_t off = 0;
    for (const auto& p : params) {
      for (std::size_t i = 0; i < p.size; ++i) {
        const double g = static_cast<double>(p.grads[i]);
        m_[off + i] = beta1_ * m_[off + i] + (1.0 - beta1_) * g;
        v_[off + i] = beta2_ * v_[off + i] + (1.0 - beta2_) * g * g;
        const double mhat = m_[off + i] / bc1;
        const double vhat = v_[off + i] / bc2;
        p.values[i] -= static_cast<T>(lr * mhat / (std::sqrt(vhat) + eps_));
      }
      off += p.size;
    }
  }

 private:
  double beta1_, beta2_, eps_;
  long long t_ = 0;
  std::vector<double> m_, v_;
};

// Single cosine annealing cycle across the run: lr(0) = lr0, monotone
// nonincreasing, lr(total-1) = floor.
inline double cosine_lr(long long step, long long total_steps, double lr0, double floor = 0.0) {
  if (total_steps <= 1 || step <= 0) return lr0;
  if (step >= total_steps - 1) return floor;
  const double t = static_cast<double>(step) / static_cast<double>(total_steps - 1);
  return floor + 0.5 * (lr0 - floor) * (1.0 + std::cos(3.14159265358979323846 * t));
}

}  // namespace uar::net
