#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "uar/harness.hpp"

namespace fs = std::filesystem;

namespace uar {

namespace {

Map2 channel_mean_sq(const Image& a, const Image& b) {
  Map2 out(a.rows, a.cols, 0.0);
  const double inv_c = 1.0 / a.channels;
  for (int ch = 0; ch < a.channels; ++ch)
    for (int r = 0; r < a.rows; ++r)
      for (int c = 0; c < a.cols; ++c) {
        const double d = a.at(ch, r, c) - b.at(ch, r, c);
        out.at(r, c) += d * d * inv_c;
      }
  return out;
}

}  // namespace

EvalOutputs evaluate(const fs::path& checkpoint, const std::vector<PairedSample>& samples,
                     const std::optional<CorruptionSpec>& corruption, const fs::path& out_dir,
                     PerceptualBackend* perceptual) {
  if (samples.empty()) throw std::domain_error("evaluate: empty dataset");
  LoadedGenerator loaded = load_checkpoint(checkpoint);

  for (const auto& s : samples)
    if (s.x_a.rows != loaded.image_size || s.x_a.cols != loaded.image_size) {
      char msg[192];
      std::snprintf(msg, sizeof(msg),
                    "evaluate: dataset size %dx%d does not match checkpoint %dx%d "
                    "(arch fingerprint %016llx)",
                    s.x_a.rows, s.x_a.cols, loaded.image_size, loaded.image_size,
                    static_cast<unsigned long long>(loaded.arch_fp));
      throw std::runtime_error(msg);
    }

  const bool exporting = !out_dir.empty();
  if (exporting) fs::create_directories(out_dir);

  EvalOutputs out;
  double ssim_sum = 0.0, psnr_sum = 0.0, rrmse_sum = 0.0, lpips_sum = 0.0;

  for (std::size_t idx = 0; idx < samples.size(); ++idx) {
    const PairedSample& s = samples[idx];
    Image input = s.x_a;
    if (corruption) {
      CorruptionSpec per_sample = *corruption;
      per_sample.seed = Rng::mix(corruption->seed, idx);
      input = corrupt(input, per_sample);
    }

    net::Tensor4<float> x(1, 3, input.rows, input.cols);
    for (std::size_t j = 0; j < input.v.size(); ++j) x.v[j] = static_cast<float>(input.v[j]);
    auto gen_out = loaded.generator.forward(x);

    Image recon(input.rows, input.cols, 3);
    for (std::size_t j = 0; j < recon.v.size(); ++j)
      recon.v[j] = static_cast<double>(gen_out.recon.v[j]);
    Map2 alpha(input.rows, input.cols), beta(input.rows, input.cols);
    for (std::size_t j = 0; j < alpha.v.size(); ++j) {
      alpha.v[j] = static_cast<double>(gen_out.alpha.v[j]);
      beta.v[j] = static_cast<double>(gen_out.beta.v[j]);
    }

    const GndParams params{alpha, beta};
    const Map2 sigma2 = gnd_variance(params, loaded.generator.options().beta_min);
    const Map2 residual_sq = channel_mean_sq(recon, s.x_b);

    const double sample_psnr = psnr(s.x_b, recon);
    const double sample_ssim = ssim(s.x_b, recon);
    const double sample_rrmse = rrmse(s.x_b, recon);
    out.per_sample_psnr.push_back(sample_psnr);
    out.per_sample_ssim.push_back(sample_ssim);
    out.per_sample_rrmse.push_back(sample_rrmse);
    psnr_sum += sample_psnr;
    ssim_sum += sample_ssim;
    rrmse_sum += sample_rrmse;
    if (perceptual) lpips_sum += *perceptual_distance(s.x_b, recon, perceptual);

    if (exporting) {
      const std::string stem = s.id.empty() ? "sample_" + std::to_string(idx) : s.id;
      save_image_png(recon, out_dir / (stem + "_recon.png"));
      save_image_png(input, out_dir / (stem + "_input.png"));
      Map2 recon_mean(recon.rows, recon.cols, 0.0);
      for (int ch = 0; ch < 3; ++ch)
        for (int r = 0; r < recon.rows; ++r)
          for (int c = 0; c < recon.cols; ++c) recon_mean.at(r, c) += recon.at(ch, r, c) / 3.0;
      export_float_map(recon_mean, out_dir / (stem + "_recon_mean.fmap"));
      export_float_map(residual_sq, out_dir / (stem + "_residual_sq.fmap"));
      export_float_map(sigma2, out_dir / (stem + "_sigma2.fmap"));
      export_float_map(alpha, out_dir / (stem + "_alpha.fmap"));
      export_float_map(beta, out_dir / (stem + "_beta.fmap"));
    }

    out.sigma2.push_back(sigma2);
    out.alpha.push_back(std::move(alpha));
    out.beta.push_back(std::move(beta));
    out.residual_sq.push_back(residual_sq);
  }

  if (corruption && (corruption->kind == CorruptionKind::kDisk ||
                     corruption->kind == CorruptionKind::kRing)) {
    out.mask = corruption_mask(*corruption, loaded.image_size, loaded.image_size);
    if (exporting) {
      Map2 mask_map(out.mask->rows, out.mask->cols);
      for (std::size_t j = 0; j < mask_map.v.size(); ++j)
        mask_map.v[j] = static_cast<double>(out.mask->v[j]);
      export_float_map(mask_map, out_dir / "corruption_mask.fmap");
    }
  }

  const double inv_n = 1.0 / static_cast<double>(samples.size());
  out.report.ssim = ssim_sum * inv_n;
  out.report.psnr = psnr_sum * inv_n;
  out.report.rrmse = rrmse_sum * inv_n;
  out.report.n_images = static_cast<int>(samples.size());
  if (perceptual) out.report.lpips = lpips_sum * inv_n;

  if (exporting) {
    nlohmann::json j{{"metrics", to_json(out.report)},
                     {"per_sample",
                      {{"psnr", out.per_sample_psnr},
                       {"ssim", out.per_sample_ssim},
                       {"rrmse", out.per_sample_rrmse}}}};
    if (corruption) j["corruption"] = to_json(*corruption);
    std::ofstream f(out_dir / "eval_report.json");
    f << j.dump(2) << "\n";
  }
  return out;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("spearman: need two equal-length series of size >= 2");

  auto ranks = [](const std::vector<double>& x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
    std::vector<double> r(x.size());
    std::size_t i = 0;
    while (i < order.size()) {
      std::size_t j = i;
      while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
      const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };

  const std::vector<double> ra = ranks(a), rb = ranks(b);
  double mean_a = 0, mean_b = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    mean_a += ra[i];
    mean_b += rb[i];
  }
  mean_a /= static_cast<double>(ra.size());
  mean_b /= static_cast<double>(rb.size());
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double da = ra[i] - mean_a, db = rb[i] - mean_b;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va == 0.0 || vb == 0.0) return 0.0;  // a constant series carries no ordering
  return cov / std::sqrt(va * vb);
}

UncertaintyDiagnostics uncertainty_diagnostics(const std::vector<Map2>& sigma2,
                                               const std::optional<Mask>& mask,
                                               const std::vector<Map2>* truth_variance,
                                               const std::vector<Map2>& beta_maps) {
  UncertaintyDiagnostics diag;

  if (mask) {
    for (const Map2& s2 : sigma2) {
      double in_sum = 0, out_sum = 0;
      long long in_n = 0, out_n = 0;
      for (int r = 0; r < s2.rows; ++r)
        for (int c = 0; c < s2.cols; ++c) {
          if (mask->at(r, c)) {
            in_sum += s2.at(r, c);
            ++in_n;
          } else {
            out_sum += s2.at(r, c);
            ++out_n;
          }
        }
      if (in_n > 0 && out_n > 0)
        diag.per_sample_artifact_ratio.push_back((in_sum / in_n) / (out_sum / out_n));
    }
    if (!diag.per_sample_artifact_ratio.empty()) {
      double acc = 0;
      for (double r : diag.per_sample_artifact_ratio) acc += r;
      diag.artifact_ratio = acc / static_cast<double>(diag.per_sample_artifact_ratio.size());
    }
  }

  if (truth_variance && truth_variance->size() == sigma2.size() && !sigma2.empty()) {
    for (std::size_t i = 0; i < sigma2.size(); ++i)
      diag.per_sample_rank_correlation.push_back(
          spearman(sigma2[i].v, (*truth_variance)[i].v));
    double acc = 0;
    for (double r : diag.per_sample_rank_correlation) acc += r;
    diag.rank_correlation = acc / static_cast<double>(diag.per_sample_rank_correlation.size());
  }

  RegularizerSpec tv_spec;  // tv_iso, eps 1e-7
  for (const Map2& b : beta_maps) diag.per_sample_beta_tv.push_back(penalty(b, tv_spec));
  if (!diag.per_sample_beta_tv.empty()) {
    double acc = 0;
    for (double t : diag.per_sample_beta_tv) acc += t;
    diag.beta_tv = acc / static_cast<double>(diag.per_sample_beta_tv.size());
  }
  return diag;
}

}  // namespace uar
