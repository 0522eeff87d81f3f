#include <cmath>
#include <limits>
#include <stdexcept>

#include "uar/harness.hpp"

namespace uar {

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

nlohmann::json to_json(const TrainConfig& c) {
  return {
      {"epochs", c.epochs},
      {"batch_size", c.batch_size},
      {"lr", c.lr},
      {"schedule", c.schedule},
      {"weights",
       {{"w_l1", c.weights.w_l1},
        {"w_adv", c.weights.w_adv},
        {"w_nll", c.weights.w_nll},
        {"lambda", c.weights.lambda}}},
      {"reg_spec",
       {{"kind", to_string(c.reg_spec.kind)},
        {"epsilon", c.reg_spec.epsilon},
        {"boundary", "replicate"}}},
      {"activation_epoch", c.activation_epoch},
      {"image_size", c.image_size},
      {"seed", c.seed},
  };
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.epochs = j.at("epochs").get<int>();
  c.batch_size = j.at("batch_size").get<int>();
  c.lr = j.at("lr").get<double>();
  c.schedule = j.at("schedule").get<std::string>();
  const auto& w = j.at("weights");
  c.weights.w_l1 = w.at("w_l1").get<double>();
  c.weights.w_adv = w.at("w_adv").get<double>();
  c.weights.w_nll = w.at("w_nll").get<double>();
  c.weights.lambda = w.at("lambda").get<double>();
  const auto& r = j.at("reg_spec");
  c.reg_spec.kind = reg_kind_from_string(r.at("kind").get<std::string>());
  c.reg_spec.epsilon = r.at("epsilon").get<double>();
  if (r.contains("boundary") && r.at("boundary") != "replicate")
    throw std::invalid_argument("TrainConfig: only replicate boundary is supported");
  c.activation_epoch = j.at("activation_epoch").get<int>();
  c.image_size = j.at("image_size").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();

  if (c.epochs <= 0 || c.batch_size <= 0) throw std::domain_error("TrainConfig: epochs/batch_size must be positive");
  if (!(c.lr > 0.0)) throw std::domain_error("TrainConfig: lr must be positive");
  if (c.schedule != "cosine") throw std::invalid_argument("TrainConfig: unknown schedule " + c.schedule);
  if (c.activation_epoch < 0) throw std::domain_error("TrainConfig: activation_epoch must be >= 0");
  if (c.image_size < 16 || c.image_size % 8 != 0)
    throw std::domain_error("TrainConfig: image_size must be >= 16 and divisible by 8");
  if (c.weights.w_l1 < 0 || c.weights.w_adv < 0 || c.weights.w_nll < 0 || c.weights.lambda < 0)
    throw std::domain_error("TrainConfig: loss weights must be >= 0");
  return c;
}

std::uint64_t config_fingerprint(const TrainConfig& c) { return fnv1a64(to_json(c).dump()); }

nlohmann::json to_json(const CorruptionSpec& s) {
  nlohmann::json j{{"kind", to_string(s.kind)}, {"seed", s.seed}};
  switch (s.kind) {
    case CorruptionKind::kGaussian: j["variance"] = s.variance; break;
    case CorruptionKind::kUniform:
      j["low"] = s.low;
      j["high"] = s.high;
      break;
    case CorruptionKind::kImpulse: j["probability"] = s.probability; break;
    case CorruptionKind::kDisk:
      j["center_row"] = s.center_row;
      j["center_col"] = s.center_col;
      j["radius"] = s.radius;
      j["fill"] = s.fill;
      break;
    case CorruptionKind::kRing:
      j["center_row"] = s.center_row;
      j["center_col"] = s.center_col;
      j["inner_radius"] = s.inner_radius;
      j["outer_radius"] = s.outer_radius;
      j["fill"] = s.fill;
      break;
  }
  return j;
}

CorruptionSpec corruption_spec_from_json(const nlohmann::json& j) {
  CorruptionSpec s;
  s.kind = corruption_kind_from_string(j.at("kind").get<std::string>());
  s.seed = j.value("seed", std::uint64_t(0));
  switch (s.kind) {
    case CorruptionKind::kGaussian: s.variance = j.at("variance").get<double>(); break;
    case CorruptionKind::kUniform:
      s.low = j.at("low").get<double>();
      s.high = j.at("high").get<double>();
      break;
    case CorruptionKind::kImpulse: s.probability = j.at("probability").get<double>(); break;
    case CorruptionKind::kDisk:
      s.center_row = j.at("center_row").get<double>();
      s.center_col = j.at("center_col").get<double>();
      s.radius = j.at("radius").get<double>();
      s.fill = j.at("fill").get<double>();
      break;
    case CorruptionKind::kRing:
      s.center_row = j.at("center_row").get<double>();
      s.center_col = j.at("center_col").get<double>();
      s.inner_radius = j.at("inner_radius").get<double>();
      s.outer_radius = j.at("outer_radius").get<double>();
      s.fill = j.at("fill").get<double>();
      break;
  }
  validate(s);
  return s;
}

namespace {

// +inf has no JSON literal; encode it as the string "inf".
nlohmann::json encode_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double decode_real(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::invalid_argument("decode_real: bad value " + s);
  }
  return j.get<double>();
}

}  // namespace

nlohmann::json to_json(const MetricReport& r) {
  nlohmann::json j{{"ssim", r.ssim},
                   {"psnr", encode_real(r.psnr)},
                   {"rrmse", r.rrmse},
                   {"n_images", r.n_images}};
  if (r.lpips) j["lpips"] = *r.lpips;
  return j;
}

MetricReport metric_report_from_json(const nlohmann::json& j) {
  MetricReport r;
  r.ssim = j.at("ssim").get<double>();
  r.psnr = decode_real(j.at("psnr"));
  r.rrmse = j.at("rrmse").get<double>();
  r.n_images = j.at("n_images").get<int>();
  if (j.contains("lpips")) r.lpips = j.at("lpips").get<double>();
  return r;
}

nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json losses = nlohmann::json::array();
  for (const auto& b : r.epoch_losses)
    losses.push_back({{"l1", b.l1}, {"adv", b.adv}, {"nll", b.nll}, {"reg", b.reg}, {"total", b.total}});
  return {{"config_fp", r.config_fp},
          {"arch_fp", r.arch_fp},
          {"epoch_losses", losses},
          {"final_metrics", to_json(r.final_metrics)},
          {"checkpoint_path", r.checkpoint_path},
          {"loss_log_path", r.loss_log_path}};
}

RunRecord run_record_from_json(const nlohmann::json& j) {
  RunRecord r;
  r.config_fp = j.at("config_fp").get<std::uint64_t>();
  r.arch_fp = j.at("arch_fp").get<std::uint64_t>();
  for (const auto& b : j.at("epoch_losses")) {
    LossBreakdown lb;
    lb.l1 = b.at("l1").get<double>();
    lb.adv = b.at("adv").get<double>();
    lb.nll = b.at("nll").get<double>();
    lb.reg = b.at("reg").get<double>();
    lb.total = b.at("total").get<double>();
    r.epoch_losses.push_back(lb);
  }
  r.final_metrics = metric_report_from_json(j.at("final_metrics"));
  r.checkpoint_path = j.at("checkpoint_path").get<std::string>();
  r.loss_log_path = j.at("loss_log_path").get<std::string>();
  return r;
}

nlohmann::json to_json(const UncertaintyDiagnostics& d) {
  nlohmann::json j{{"beta_tv", d.beta_tv},
                   {"per_sample_beta_tv", d.per_sample_beta_tv}};
  j["artifact_ratio"] = d.artifact_ratio ? nlohmann::json(*d.artifact_ratio) : nlohmann::json();
  j["rank_correlation"] =
      d.rank_correlation ? nlohmann::json(*d.rank_correlation) : nlohmann::json();
  j["per_sample_artifact_ratio"] = d.per_sample_artifact_ratio;
  j["per_sample_rank_correlation"] = d.per_sample_rank_correlation;
  return j;
}

}  // namespace uar
