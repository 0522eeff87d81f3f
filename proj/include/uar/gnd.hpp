#pragma once

#include "uar/tensor.hpp"

namespace uar {

// Default floor for the shape parameter. Gamma(1/beta) and the variance
// formula blow up as beta -> 0; 0.1 keeps both representable in double.
inline constexpr double kBetaMin = 0.1;

// Default floor for the scale parameter produced by the network head.
inline constexpr double kAlphaMin = 1e-3;

// Guard added inside log(|r| + eta) so zero residuals stay finite.
inline constexpr double kLogGuard = 1e-12;

enum class Reduction { kSum, kMean };

// Per-pixel scale/shape maps of the zero-mean generalized normal
// residual model. alpha > 0 and beta >= beta_min everywhere.
struct GndParams {
  Map2 alpha;
  Map2 beta;
};

struct NllResult {
  double total = 0.0;
  Map2 per_pixel;
};

struct GndGradients {
  Image d_residual;
  Map2 d_alpha;
  Map2 d_beta;
};

// Channel-reduced absolute residual: mean over channels of |r| at each
// pixel. One residual magnitude per pixel, matching the one-(alpha,beta)-
// per-pixel parameterization.
Map2 mean_abs_residual(const Image& residual);

// Negative log-likelihood of the zero-mean GND, per pixel:
//   (|r|/alpha)^beta - log(beta/alpha) + log Gamma(1/beta)
// with |r| the channel-reduced absolute residual. The power term is
// evaluated as exp(beta*(log(|r| + 1e-12) - log alpha)).
//
// Throws std::invalid_argument on shape mismatch and std::domain_error
// when alpha <= 0 or beta < beta_min anywhere (inputs are never clamped).
NllResult gnd_nll(const Image& residual, const GndParams& params,
                  Reduction reduction, double beta_min = kBetaMin);

// Gaussian negative log-likelihood, per pixel: r^2/(2 sigma^2) + log(sigma^2)/2,
// with r the channel-reduced absolute residual (so multi-channel inputs
// reduce exactly as in gnd_nll). sigma2 must be > 0 everywhere.
NllResult gaussian_nll(const Image& residual, const Map2& sigma2, Reduction reduction);

// Predictive variance alpha^2 * Gamma(3/beta) / Gamma(1/beta), pixelwise.
Map2 gnd_variance(const GndParams& params, double beta_min = kBetaMin);

// Analytic gradients of the *summed* NLL with respect to the residual,
// alpha and beta maps. Verification reference for the training path.
//
// At pixels where the channel-reduced residual is exactly zero the
// |r|^beta term is not differentiable for beta < 1; that case throws
// std::domain_error instead of returning a smoothed value. For beta >= 1
// the residual gradient at zero is the (sub)gradient 0.
GndGradients gnd_nll_gradients(const Image& residual, const GndParams& params,
                               double beta_min = kBetaMin);

}  // namespace uar
