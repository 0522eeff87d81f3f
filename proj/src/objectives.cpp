#include "uar/objectives.hpp"

#include <stdexcept>

namespace uar {

double adv_loss_generator(const std::vector<double>& pooled_fake_scores) {
  if (pooled_fake_scores.empty()) throw std::domain_error("adv_loss_generator: empty batch");
  double acc = 0.0;
  for (double s : pooled_fake_scores) acc += (s - 1.0) * (s - 1.0);
  return acc / static_cast<double>(pooled_fake_scores.size());
}

double discriminator_loss(const std::vector<double>& pooled_real_scores,
                          const std::vector<double>& pooled_fake_scores) {
  if (pooled_real_scores.empty() || pooled_fake_scores.empty())
    throw std::domain_error("discriminator_loss: empty batch");
  double fake = 0.0, real = 0.0;
  for (double s : pooled_fake_scores) fake += s * s;
  for (double s : pooled_real_scores) real += (s - 1.0) * (s - 1.0);
  fake /= static_cast<double>(pooled_fake_scores.size());
  real /= static_cast<double>(pooled_real_scores.size());
  return 0.5 * (fake + real);
}

double l1_fidelity(const Image& x_b, const Image& x_hat) {
  require_same_shape(x_b, x_hat, "l1_fidelity");
  double acc = 0.0;
  for (std::size_t i = 0; i < x_b.v.size(); ++i) acc += std::abs(x_b.v[i] - x_hat.v[i]);
  return acc / static_cast<double>(x_b.v.size());
}

LossBreakdown generator_total(const GeneratorBatch& batch, const LossWeights& weights,
                              const RegularizerSpec& reg_spec, int epoch,
                              int activation_epoch) {
  const std::size_t n = batch.targets.size();
  if (n == 0) throw std::domain_error("generator_total: empty batch");
  if (batch.reconstructions.size() != n || batch.params.size() != n ||
      batch.pooled_fake_scores.size() != n)
    throw std::invalid_argument("generator_total: batch component sizes disagree");

  double l1 = 0.0, nll = 0.0, reg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    l1 += l1_fidelity(batch.targets[i], batch.reconstructions[i]);
    Image residual = batch.reconstructions[i];
    for (std::size_t j = 0; j < residual.v.size(); ++j) residual.v[j] -= batch.targets[i].v[j];
    nll += gnd_nll(residual, batch.params[i], Reduction::kMean).total;
    if (regularizer_active(epoch, activation_epoch))
      reg += penalty(batch.params[i].beta, reg_spec);
  }
  l1 /= static_cast<double>(n);
  nll /= static_cast<double>(n);
  reg /= static_cast<double>(n);

  const double adv = adv_loss_generator(batch.pooled_fake_scores);
  return LossBreakdown::make(l1, adv, nll, reg, weights);
}

}  // namespace uar
