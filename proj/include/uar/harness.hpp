#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uar/corruptions.hpp"
#include "uar/dataio.hpp"
#include "uar/metrics.hpp"
#include "uar/net/generator.hpp"
#include "uar/objectives.hpp"
#include "uar/regularizers.hpp"

namespace uar {

// Run configuration. Serializes to/from JSON with exactly these keys:
// epochs, batch_size, lr, schedule, weights{w_l1,w_adv,w_nll,lambda},
// reg_spec{kind,epsilon,boundary}, activation_epoch, image_size, seed.
struct TrainConfig {
  int epochs = 30;
  int batch_size = 4;
  double lr = 1e-4;
  std::string schedule = "cosine";
  LossWeights weights;
  RegularizerSpec reg_spec;
  int activation_epoch = kDefaultActivationEpoch;
  int image_size = 64;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const nlohmann::json& j);
std::uint64_t config_fingerprint(const TrainConfig& c);

nlohmann::json to_json(const CorruptionSpec& s);
CorruptionSpec corruption_spec_from_json(const nlohmann::json& j);

// Architecture knobs. Defaults are the desk-scale four-level design;
// these are recorded in the checkpoint, not the run config.
struct NetOptions {
  int gen_base_width = 32;
  int disc_base_width = 32;
  double alpha_min = kAlphaMin;
  double beta_min = kBetaMin;
};

struct RunRecord {
  std::uint64_t config_fp = 0;
  std::uint64_t arch_fp = 0;
  std::vector<LossBreakdown> epoch_losses;  // per-epoch means
  MetricReport final_metrics;
  std::string checkpoint_path;
  std::string loss_log_path;
};

nlohmann::json to_json(const RunRecord& r);
RunRecord run_record_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------
// Checkpoints: generator weights + architecture fingerprint. Loading
// refuses a file whose stored fingerprint disagrees with the fingerprint
// recomputed from its own architecture fields.
// ---------------------------------------------------------------------
struct LoadedGenerator {
  net::UnetGenerator<float> generator;
  int image_size = 0;
  std::uint64_t arch_fp = 0;
};

void save_checkpoint(const std::filesystem::path& path, net::UnetGenerator<float>& gen,
                     int image_size);
LoadedGenerator load_checkpoint(const std::filesystem::path& path);

std::uint64_t fnv1a64(const std::string& s);

// ---------------------------------------------------------------------
// Training. One discriminator step then one generator step per batch,
// Adam with a single cosine annealing cycle over all generator steps.
// Emits under out_dir: config.json, loss_log.txt (one line per generator
// step: step l1 adv nll reg total lr), checkpoint.bin, run_record.json.
// Aborts with the offending breakdown if the loss leaves the finite
// range. Fully reproducible given (config, platform).
// ---------------------------------------------------------------------
RunRecord train(const TrainConfig& config, const NetOptions& net_options,
                const std::vector<PairedSample>& trainset,
                const std::vector<PairedSample>& valset,
                const std::filesystem::path& out_dir);

// ---------------------------------------------------------------------
// Evaluation: optional input corruption (per-sample seed derived from
// spec.seed and the sample index), reconstruction, metrics against the
// clean target, and per-sample map exports (float-map + previews).
// ---------------------------------------------------------------------
struct EvalOutputs {
  MetricReport report;
  std::vector<double> per_sample_psnr, per_sample_ssim, per_sample_rrmse;
  std::vector<Map2> sigma2, alpha, beta, residual_sq;
  std::optional<Mask> mask;  // present for disk/ring corruption
};

EvalOutputs evaluate(const std::filesystem::path& checkpoint,
                     const std::vector<PairedSample>& samples,
                     const std::optional<CorruptionSpec>& corruption,
                     const std::filesystem::path& out_dir,
                     PerceptualBackend* perceptual = nullptr);

// ---------------------------------------------------------------------
// Uncertainty diagnostics:
//   artifact_ratio:    mean sigma^2 inside mask / outside, per sample
//   rank_correlation:  Spearman(sigma^2, true variance), per sample
//   beta_tv:           tv_iso (eps 1e-7) of each beta map
// The aggregate fields are means; absent inputs mark the corresponding
// statistic unavailable.
// ---------------------------------------------------------------------
struct UncertaintyDiagnostics {
  std::optional<double> artifact_ratio;
  std::optional<double> rank_correlation;
  double beta_tv = 0.0;
  std::vector<double> per_sample_artifact_ratio;
  std::vector<double> per_sample_rank_correlation;
  std::vector<double> per_sample_beta_tv;
};

UncertaintyDiagnostics uncertainty_diagnostics(const std::vector<Map2>& sigma2,
                                               const std::optional<Mask>& mask,
                                               const std::vector<Map2>* truth_variance,
                                               const std::vector<Map2>& beta_maps);

nlohmann::json to_json(const UncertaintyDiagnostics& d);

// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

// ---------------------------------------------------------------------
// Results table. Best value per metric column is flagged (SSIM/PSNR
// high, LPIPS/RRMSE low); ties flag every tied row.
// ---------------------------------------------------------------------
struct ReportRow {
  std::string label;
  MetricReport metrics;
};

struct RenderedReport {
  std::string text;
  nlohmann::json machine;
};

RenderedReport render_report(const std::vector<ReportRow>& rows);

nlohmann::json to_json(const MetricReport& r);
MetricReport metric_report_from_json(const nlohmann::json& j);

}  // namespace uar
