#pragma once

#include <vector>

#include "uar/gnd.hpp"
#include "uar/regularizers.hpp"
#include "uar/tensor.hpp"

namespace uar {

// Weights of the generator objective. The regularizer weight lambda
// defaults to the cautious 1e-12 setting.
struct LossWeights {
  double w_l1 = 1.0;
  double w_adv = 1e-3;
  double w_nll = 1e-4;
  double lambda = 1e-12;
};

// Named components plus the weighted total. reg is the raw penalty value
// (zeroed before the activation epoch); total recombines the parts with
// the weights on every construction.
struct LossBreakdown {
  double l1 = 0.0;
  double adv = 0.0;
  double nll = 0.0;
  double reg = 0.0;
  double total = 0.0;

  static LossBreakdown make(double l1, double adv, double nll, double reg,
                            const LossWeights& w) {
    LossBreakdown b;
    b.l1 = l1;
    b.adv = adv;
    b.nll = nll;
    b.reg = reg;
    b.total = w.w_l1 * l1 + w.w_adv * adv + w.w_nll * nll + w.lambda * reg;
    return b;
  }
};

// Least-squares generator loss on pooled patch scores: mean over the
// batch of (pooled - 1)^2.
double adv_loss_generator(const std::vector<double>& pooled_fake_scores);

// 0.5 * [mean(pooled_fake^2) + mean((pooled_real - 1)^2)].
double discriminator_loss(const std::vector<double>& pooled_real_scores,
                          const std::vector<double>& pooled_fake_scores);

// Mean absolute difference over all pixels and channels.
double l1_fidelity(const Image& x_b, const Image& x_hat);

// Composite generator objective for one batch. Components: L1 fidelity,
// pooled adversarial MSE, GND NLL (mean reduction, one breakdown over the
// whole batch), and the variation penalty on beta averaged per image.
// The penalty is gated by regularizer_active(epoch, activation_epoch).
struct GeneratorBatch {
  std::vector<Image> targets;          // x_b
  std::vector<Image> reconstructions;  // x_hat
  std::vector<GndParams> params;       // per-sample alpha/beta maps
  std::vector<double> pooled_fake_scores;
};

LossBreakdown generator_total(const GeneratorBatch& batch, const LossWeights& weights,
                              const RegularizerSpec& reg_spec, int epoch,
                              int activation_epoch = kDefaultActivationEpoch);

}  // namespace uar
