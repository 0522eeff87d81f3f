#include "uar/gnd.hpp"

#include <cmath>
#include <stdexcept>

#include "uar/special.hpp"

namespace uar {

namespace {

void check_params(const GndParams& p, double beta_min) {
  if (!p.alpha.same_shape(p.beta)) throw std::invalid_argument("GndParams: alpha/beta shape mismatch");
  for (double a : p.alpha.v)
    if (!(a > 0.0) || !std::isfinite(a)) throw std::domain_error("GndParams: alpha must be > 0");
  for (double b : p.beta.v)
    if (!(b >= beta_min) || !std::isfinite(b))
      throw std::domain_error("GndParams: beta must be >= beta_min");
}

void check_residual_shape(const Image& r, int rows, int cols, const char* where) {
  if (r.rows != rows || r.cols != cols)
    throw std::invalid_argument(std::string(where) + ": residual spatial size mismatch");
  if (!all_finite(r.v)) throw std::domain_error(std::string(where) + ": residual must be finite");
}

double reduce(const Map2& per_pixel, Reduction reduction) {
  double total = 0.0;
  for (double x : per_pixel.v) total += x;
  if (reduction == Reduction::kMean && !per_pixel.v.empty())
    total /= static_cast<double>(per_pixel.v.size());
  return total;
}

}  // namespace

Map2 mean_abs_residual(const Image& residual) {
  Map2 out(residual.rows, residual.cols, 0.0);
  const double inv_c = 1.0 / residual.channels;
  for (int ch = 0; ch < residual.channels; ++ch)
    for (int r = 0; r < residual.rows; ++r)
      for (int c = 0; c < residual.cols; ++c) out.at(r, c) += std::abs(residual.at(ch, r, c)) * inv_c;
  return out;
}

NllResult gnd_nll(const Image& residual, const GndParams& params, Reduction reduction,
                  double beta_min) {
  check_params(params, beta_min);
  check_residual_shape(residual, params.alpha.rows, params.alpha.cols, "gnd_nll");

  const Map2 rbar = mean_abs_residual(residual);
  NllResult res;
  res.per_pixel = Map2(rbar.rows, rbar.cols);
  for (std::size_t i = 0; i < rbar.v.size(); ++i) {
    const double a = params.alpha.v[i];
    const double b = params.beta.v[i];
    const double u = std::log(rbar.v[i] + kLogGuard) - std::log(a);
    const double t = std::exp(b * u);
    res.per_pixel.v[i] = t - std::log(b) + std::log(a) + log_gamma(1.0 / b);
  }
  res.total = reduce(res.per_pixel, reduction);
  return res;
}

NllResult gaussian_nll(const Image& residual, const Map2& sigma2, Reduction reduction) {
  for (double s : sigma2.v)
    if (!(s > 0.0) || !std::isfinite(s)) throw std::domain_error("gaussian_nll: sigma2 must be > 0");
  check_residual_shape(residual, sigma2.rows, sigma2.cols, "gaussian_nll");

  const Map2 rbar = mean_abs_residual(residual);
  NllResult res;
  res.per_pixel = Map2(rbar.rows, rbar.cols);
  for (std::size_t i = 0; i < rbar.v.size(); ++i) {
    const double r = rbar.v[i];
    const double s2 = sigma2.v[i];
    res.per_pixel.v[i] = r * r / (2.0 * s2) + 0.5 * std::log(s2);
  }
  res.total = reduce(res.per_pixel, reduction);
  return res;
}

Map2 gnd_variance(const GndParams& params, double beta_min) {
  check_params(params, beta_min);
  Map2 out(params.alpha.rows, params.alpha.cols);
  for (std::size_t i = 0; i < out.v.size(); ++i) {
    const double a = params.alpha.v[i];
    const double b = params.beta.v[i];
    // exp form of a^2 Gamma(3/b)/Gamma(1/b); Gamma itself overflows for small b
    out.v[i] = std::exp(2.0 * std::log(a) + log_gamma(3.0 / b) - log_gamma(1.0 / b));
  }
  return out;
}

GndGradients gnd_nll_gradients(const Image& residual, const GndParams& params, double beta_min) {
  check_params(params, beta_min);
  check_residual_shape(residual, params.alpha.rows, params.alpha.cols, "gnd_nll_gradients");

  const Map2 rbar = mean_abs_residual(residual);
  for (std::size_t i = 0; i < rbar.v.size(); ++i)
    if (rbar.v[i] == 0.0 && params.beta.v[i] < 1.0)
      throw std::domain_error(
          "gnd_nll_gradients: non-differentiable at zero residual with beta < 1");

  GndGradients g;
  g.d_residual = Image(residual.rows, residual.cols, residual.channels, 0.0);
  g.d_alpha = Map2(rbar.rows, rbar.cols);
  g.d_beta = Map2(rbar.rows, rbar.cols);

  Map2 d_rbar(rbar.rows, rbar.cols);
  for (std::size_t i = 0; i < rbar.v.size(); ++i) {
    const double a = params.alpha.v[i];
    const double b = params.beta.v[i];
    const double u = std::log(rbar.v[i] + kLogGuard) - std::log(a);
    const double t = std::exp(b * u);
    g.d_alpha.v[i] = (1.0 - b * t) / a;
    g.d_beta.v[i] = t * u - 1.0 / b - digamma(1.0 / b) / (b * b);
    d_rbar.v[i] = b * t / (rbar.v[i] + kLogGuard);
  }

  // d|rbar|/dr_ch = sign(r_ch)/C; sign(0) contributes the subgradient 0.
  const double inv_c = 1.0 / residual.channels;
  for (int ch = 0; ch < residual.channels; ++ch)
    for (int r = 0; r < residual.rows; ++r)
      for (int c = 0; c < residual.cols; ++c) {
        const double x = residual.at(ch, r, c);
        const double s = (x > 0.0) ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
        g.d_residual.at(ch, r, c) = d_rbar.at(r, c) * s * inv_c;
      }
  return g;
}

}  // namespace uar
