#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "uar/harness.hpp"
#include "uar/net/discriminator.hpp"
#include "uar/net/optim.hpp"
#include "uar/rng.hpp"

namespace fs = std::filesystem;

namespace uar {

namespace {

net::Tensor4<float> to_tensor(const std::vector<const Image*>& images) {
  const Image& first = *images[0];
  net::Tensor4<float> t(static_cast<int>(images.size()), first.channels, first.rows, first.cols);
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = 0; j < images[i]->v.size(); ++j)
      t.v[i * t.sample_size() + j] = static_cast<float>(images[i]->v[j]);
  return t;
}

Image image_from_tensor(const net::Tensor4<float>& t, int sample) {
  Image out(t.h, t.w, t.c);
  const float* src = t.sample(sample);
  for (std::size_t j = 0; j < out.v.size(); ++j) out.v[j] = static_cast<double>(src[j]);
  return out;
}

Map2 map_from_tensor(const net::Tensor4<float>& t, int sample) {
  Map2 out(t.h, t.w);
  const float* src = t.sample(sample);
  for (std::size_t j = 0; j < out.v.size(); ++j) out.v[j] = static_cast<double>(src[j]);
  return out;
}

void check_dataset(const std::vector<PairedSample>& set, int image_size, const char* name) {
  if (set.empty()) throw std::domain_error(std::string("train: empty ") + name + " set");
  for (const auto& s : set) {
    if (s.x_a.rows != image_size || s.x_a.cols != image_size || s.x_a.channels != 3 ||
        !s.x_a.same_shape(s.x_b))
      throw std::invalid_argument(std::string("train: sample ") + s.id +
                                  " does not match the configured image size");
  }
}

}  // namespace

RunRecord train(const TrainConfig& config, const NetOptions& net_options,
                const std::vector<PairedSample>& trainset,
                const std::vector<PairedSample>& valset, const fs::path& out_dir) {
  // revalidate through the JSON path so CLI and API runs share checks
  train_config_from_json(to_json(config));
  check_dataset(trainset, config.image_size, "train");

  fs::create_directories(out_dir);
  {
    std::ofstream cfg(out_dir / "config.json");
    cfg << to_json(config).dump(2) << "\n";
  }

  Rng init_rng(Rng::mix(config.seed, 0xC0FFEE));
  net::UnetGenerator<float>::Options gen_opt;
  gen_opt.base_width = net_options.gen_base_width;
  gen_opt.alpha_min = net_options.alpha_min;
  gen_opt.beta_min = net_options.beta_min;
  net::UnetGenerator<float> gen(gen_opt, init_rng);

  net::PatchDiscriminator<float>::Options disc_opt;
  disc_opt.base_width = net_options.disc_base_width;
  disc_opt.in_channels = 6;
  net::PatchDiscriminator<float> disc(disc_opt, init_rng);

  net::Adam<float> adam_gen, adam_disc;

  const int n = static_cast<int>(trainset.size());
  const int steps_per_epoch = (n + config.batch_size - 1) / config.batch_size;
  const long long total_steps = static_cast<long long>(config.epochs) * steps_per_epoch;

  const fs::path log_path = out_dir / "loss_log.txt";
  std::ofstream log(log_path);
  log << "# step l1 adv nll reg total lr\n";

  RunRecord record;
  record.config_fp = config_fingerprint(config);
  record.arch_fp = fnv1a64(gen.arch_string(config.image_size));

  long long gstep = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    Rng epoch_rng(Rng::mix(config.seed, 0xE70C + epoch));
    shuffle(order, epoch_rng);

    const bool reg_on = regularizer_active(epoch, config.activation_epoch);
    LossBreakdown epoch_sum;
    for (int start = 0; start < n; start += config.batch_size) {
      const int bs = std::min(config.batch_size, n - start);
      std::vector<const Image*> xa_ptr(bs), xb_ptr(bs);
      for (int i = 0; i < bs; ++i) {
        xa_ptr[i] = &trainset[order[start + i]].x_a;
        xb_ptr[i] = &trainset[order[start + i]].x_b;
      }
      const net::Tensor4<float> xa = to_tensor(xa_ptr);
      const net::Tensor4<float> xb = to_tensor(xb_ptr);

      auto gen_out = gen.forward(xa);

      // ---- discriminator step: real pairs and detached fakes in one pass
      disc.zero_grad();
      net::Tensor4<float> d_in(2 * bs, 6, xa.h, xa.w);
      {
        const net::Tensor4<float> real_in = net::concat_channels(xa, xb);
        const net::Tensor4<float> fake_in = net::concat_channels(xa, gen_out.recon);
        std::copy(real_in.v.begin(), real_in.v.end(), d_in.v.begin());
        std::copy(fake_in.v.begin(), fake_in.v.end(), d_in.v.begin() + real_in.v.size());
      }
      net::Tensor4<float> scores = disc.forward(d_in);
      std::vector<double> pooled = net::global_avg_pool(scores);
      std::vector<double> pooled_real(pooled.begin(), pooled.begin() + bs);
      std::vector<double> pooled_fake(pooled.begin() + bs, pooled.end());
      // d(L_D)/d(pooled): real (p-1)/bs, fake p/bs (the 1/2 cancels the
      // squared-term derivative)
      std::vector<double> d_pooled(2 * bs);
      for (int i = 0; i < bs; ++i) {
        d_pooled[i] = (pooled[i] - 1.0) / bs;
        d_pooled[bs + i] = pooled[bs + i] / bs;
      }
      disc.backward(net::global_avg_pool_backward<float>(d_pooled, 2 * bs, 1, scores.h, scores.w));
      adam_disc.step(disc.params(), config.lr);

      // ---- generator step
      gen.zero_grad();
      disc.zero_grad();  // gradient flows through D below; discard it
      const net::Tensor4<float> fake_in = net::concat_channels(xa, gen_out.recon);
      net::Tensor4<float> fake_scores = disc.forward(fake_in);
      std::vector<double> pooled_gen = net::global_avg_pool(fake_scores);

      GeneratorBatch batch;
      batch.pooled_fake_scores = pooled_gen;
      for (int i = 0; i < bs; ++i) {
        batch.targets.push_back(image_from_tensor(xb, i));
        batch.reconstructions.push_back(image_from_tensor(gen_out.recon, i));
        batch.params.push_back({map_from_tensor(gen_out.alpha, i), map_from_tensor(gen_out.beta, i)});
      }
      const LossBreakdown breakdown =
          generator_total(batch, config.weights, config.reg_spec, epoch, config.activation_epoch);
      if (!std::isfinite(breakdown.total)) {
        char msg[256];
        std::snprintf(msg, sizeof(msg),
                      "train: non-finite loss at step %lld (l1=%g adv=%g nll=%g reg=%g total=%g)",
                      gstep, breakdown.l1, breakdown.adv, breakdown.nll, breakdown.reg,
                      breakdown.total);
        throw std::runtime_error(msg);
      }

      // adversarial gradient, through the (frozen) discriminator
      std::vector<double> d_pooled_gen(bs);
      for (int i = 0; i < bs; ++i)
        d_pooled_gen[i] = config.weights.w_adv * 2.0 * (pooled_gen[i] - 1.0) / bs;
      net::Tensor4<float> d_fake_in = disc.backward(
          net::global_avg_pool_backward<float>(d_pooled_gen, bs, 1, fake_scores.h, fake_scores.w));
      auto [d_xa_unused, d_recon] = net::split_channels(d_fake_in, 3);

      const double numel = static_cast<double>(batch.targets[0].v.size());
      const double npix = static_cast<double>(config.image_size) * config.image_size;
      net::Tensor4<float> d_alpha(bs, 1, xa.h, xa.w, 0.0f);
      net::Tensor4<float> d_beta(bs, 1, xa.h, xa.w, 0.0f);
      for (int i = 0; i < bs; ++i) {
        // L1 term: mean over batch and elements
        float* dr = d_recon.sample(i);
        const Image& target = batch.targets[i];
        const Image& recon = batch.reconstructions[i];
        const double l1_scale = config.weights.w_l1 / (numel * bs);
        for (std::size_t j = 0; j < target.v.size(); ++j) {
          const double diff = recon.v[j] - target.v[j];
          dr[j] += static_cast<float>(l1_scale * (diff > 0 ? 1.0 : (diff < 0 ? -1.0 : 0.0)));
        }

        // NLL term: gnd gradients of the summed NLL, rescaled to the
        // mean-over-pixels, mean-over-batch convention
        Image residual = recon;
        for (std::size_t j = 0; j < residual.v.size(); ++j) residual.v[j] -= target.v[j];
        GndGradients g = gnd_nll_gradients(residual, batch.params[i], gen_opt.beta_min);
        const double nll_scale = config.weights.w_nll / (npix * bs);
        for (std::size_t j = 0; j < residual.v.size(); ++j)
          dr[j] += static_cast<float>(nll_scale * g.d_residual.v[j]);
        float* da = d_alpha.sample(i);
        float* db = d_beta.sample(i);
        for (std::size_t j = 0; j < g.d_alpha.v.size(); ++j) {
          da[j] = static_cast<float>(nll_scale * g.d_alpha.v[j]);
          db[j] = static_cast<float>(nll_scale * g.d_beta.v[j]);
        }

        // variation penalty on beta, averaged per image, gated
        if (reg_on && config.weights.lambda > 0.0) {
          const Map2 pg = penalty_gradient(batch.params[i].beta, config.reg_spec);
          const double reg_scale = config.weights.lambda / bs;
          for (std::size_t j = 0; j < pg.v.size(); ++j)
            db[j] += static_cast<float>(reg_scale * pg.v[j]);
        }
      }

      gen.backward(d_recon, d_alpha, d_beta);
      const double lr = net::cosine_lr(gstep, total_steps, config.lr);
      adam_gen.step(gen.params(), lr);

      char line[256];
      std::snprintf(line, sizeof(line), "%lld %.17g %.17g %.17g %.17g %.17g %.17g\n", gstep,
                    breakdown.l1, breakdown.adv, breakdown.nll, breakdown.reg, breakdown.total, lr);
      log << line;

      epoch_sum.l1 += breakdown.l1;
      epoch_sum.adv += breakdown.adv;
      epoch_sum.nll += breakdown.nll;
      epoch_sum.reg += breakdown.reg;
      ++gstep;
    }
    const double inv_steps = 1.0 / steps_per_epoch;
    record.epoch_losses.push_back(LossBreakdown::make(epoch_sum.l1 * inv_steps,
                                                      epoch_sum.adv * inv_steps,
                                                      epoch_sum.nll * inv_steps,
                                                      epoch_sum.reg * inv_steps, config.weights));
  }
  log.close();

  const fs::path ckpt_path = out_dir / "checkpoint.bin";
  save_checkpoint(ckpt_path, gen, config.image_size);
  record.checkpoint_path = ckpt_path.string();
  record.loss_log_path = log_path.string();

  // final metrics on the validation set when given, else the train set
  const std::vector<PairedSample>& eval_set = valset.empty() ? trainset : valset;
  EvalOutputs eval = evaluate(ckpt_path, eval_set, std::nullopt, fs::path());
  record.final_metrics = eval.report;

  {
    std::ofstream rec(out_dir / "run_record.json");
    rec << to_json(record).dump(2) << "\n";
  }
  return record;
}

}  // namespace uar
