// Command-line front end: train, evaluate, corrupt, inject-artifact,
// report, synth-data. Relative --out paths resolve against the
// UAR_OUTPUT_ROOT environment variable when it is set. On failure a
// machine-readable error record is printed to stderr and the exit code
// is nonzero.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "uar/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path resolve_out(const std::string& path) {
  fs::path p(path);
  if (p.is_relative()) {
    if (const char* root = std::getenv("UAR_OUTPUT_ROOT")) return fs::path(root) / p;
  }
  return p;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

std::vector<uar::PairedSample> load_samples(const std::string& dir) {
  uar::LoadReport report = uar::load_paired_dir(dir);
  for (const auto& orphan : report.orphans)
    std::cerr << "warning: unpaired file " << orphan << "\n";
  return std::move(report.samples);
}

// Synthetic datasets written by synth-data carry truth/<id>_variance.fmap.
std::vector<uar::Map2> load_truth_maps(const std::string& dir,
                                       const std::vector<uar::PairedSample>& samples) {
  std::vector<uar::Map2> truth;
  for (const auto& s : samples) {
    const fs::path stem = fs::path(s.id).stem();
    const fs::path p = fs::path(dir) / "truth" / (stem.string() + "_variance.fmap");
    if (!fs::exists(p)) return {};
    truth.push_back(uar::import_float_map(p));
  }
  return truth;
}

int run(int argc, char** argv) {
  CLI::App app{"Paired image translation with per-pixel uncertainty and "
               "variation-regularized shape maps"};
  app.require_subcommand(1);

  // ---- train
  auto* cmd_train = app.add_subcommand("train", "Train a translator on a paired dataset");
  std::string train_config_path, train_data, train_out;
  int train_synth = 0;
  double holdout = 0.0;
  uar::NetOptions net_options;
  cmd_train->add_option("--config", train_config_path, "TrainConfig JSON file")->required();
  cmd_train->add_option("--data", train_data, "Paired dataset directory (A/, B/)");
  cmd_train->add_option("--synth", train_synth, "Generate N synthetic pairs instead of --data");
  cmd_train->add_option("--out", train_out, "Output directory")->required();
  cmd_train->add_option("--holdout", holdout, "Validation fraction (default 0)");
  cmd_train->add_option("--base-width", net_options.gen_base_width, "Generator base width");
  cmd_train->add_option("--disc-width", net_options.disc_base_width, "Discriminator base width");

  // ---- evaluate
  auto* cmd_eval = app.add_subcommand("evaluate", "Evaluate a checkpoint on a dataset");
  std::string eval_ckpt, eval_data, eval_out, eval_corruption;
  cmd_eval->add_option("--checkpoint", eval_ckpt, "Checkpoint file")->required();
  cmd_eval->add_option("--data", eval_data, "Paired dataset directory")->required();
  cmd_eval->add_option("--out", eval_out, "Output directory")->required();
  cmd_eval->add_option("--corruption", eval_corruption, "CorruptionSpec JSON file");

  // ---- corrupt
  auto* cmd_corrupt = app.add_subcommand("corrupt", "Apply a noise corruption to an image");
  std::string cor_in, cor_out, cor_spec;
  cmd_corrupt->add_option("--in", cor_in, "Input image")->required();
  cmd_corrupt->add_option("--out", cor_out, "Output image")->required();
  cmd_corrupt->add_option("--spec", cor_spec, "CorruptionSpec JSON file")->required();

  // ---- inject-artifact
  auto* cmd_artifact = app.add_subcommand("inject-artifact", "Overwrite a disk/ring region");
  std::string art_in, art_out, art_spec, art_mask;
  cmd_artifact->add_option("--in", art_in, "Input image")->required();
  cmd_artifact->add_option("--out", art_out, "Output image")->required();
  cmd_artifact->add_option("--spec", art_spec, "CorruptionSpec JSON file (disk or ring)")->required();
  cmd_artifact->add_option("--mask-out", art_mask, "Also write the artifact mask (float map)");

  // ---- report
  auto* cmd_report = app.add_subcommand("report", "Render a results table from eval reports");
  std::vector<std::string> report_rows;
  std::string report_out;
  cmd_report->add_option("--row", report_rows, "LABEL=eval_report.json (repeatable)")->required();
  cmd_report->add_option("--out", report_out, "Output prefix (.txt/.json)")->required();

  // ---- synth-data
  auto* cmd_synth = app.add_subcommand("synth-data", "Generate a synthetic paired dataset");
  int synth_n = 64, synth_size = 64;
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  cmd_synth->add_option("--n", synth_n, "Number of pairs");
  cmd_synth->add_option("--size", synth_size, "Image size");
  cmd_synth->add_option("--seed", synth_seed, "Seed");
  cmd_synth->add_option("--out", synth_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (cmd_train->parsed()) {
    const uar::TrainConfig config = uar::train_config_from_json(load_json(train_config_path));
    std::vector<uar::PairedSample> samples;
    if (train_synth > 0) {
      for (auto& t : uar::generate_synthetic(train_synth, config.image_size, config.seed))
        samples.push_back(std::move(t.sample));
    } else if (!train_data.empty()) {
      samples = load_samples(train_data);
    } else {
      throw std::runtime_error("train: need --data or --synth");
    }
    std::vector<uar::PairedSample> train_set = samples, val_set;
    if (holdout > 0.0) {
      uar::SplitResult s = uar::split(samples, {1.0 - holdout, 0.0, holdout}, config.seed);
      train_set = std::move(s.train);
      val_set = std::move(s.test);
    }
    const uar::RunRecord record =
        uar::train(config, net_options, train_set, val_set, resolve_out(train_out));
    std::cout << uar::to_json(record).dump(2) << "\n";
    return 0;
  }

  if (cmd_eval->parsed()) {
    std::vector<uar::PairedSample> samples = load_samples(eval_data);
    std::optional<uar::CorruptionSpec> corruption;
    if (!eval_corruption.empty())
      corruption = uar::corruption_spec_from_json(load_json(eval_corruption));
    const fs::path out_dir = resolve_out(eval_out);
    uar::EvalOutputs outputs = uar::evaluate(eval_ckpt, samples, corruption, out_dir);

    const std::vector<uar::Map2> truth = load_truth_maps(eval_data, samples);
    uar::UncertaintyDiagnostics diag = uar::uncertainty_diagnostics(
        outputs.sigma2, outputs.mask, truth.empty() ? nullptr : &truth, outputs.beta);
    std::ofstream f(out_dir / "diagnostics.json");
    f << uar::to_json(diag).dump(2) << "\n";
    std::cout << uar::to_json(outputs.report).dump(2) << "\n";
    return 0;
  }

  if (cmd_corrupt->parsed() || cmd_artifact->parsed()) {
    const bool artifact = cmd_artifact->parsed();
    const uar::CorruptionSpec spec =
        uar::corruption_spec_from_json(load_json(artifact ? art_spec : cor_spec));
    if (artifact && spec.kind != uar::CorruptionKind::kDisk &&
        spec.kind != uar::CorruptionKind::kRing)
      throw std::runtime_error("inject-artifact: spec must be disk or ring");
    if (!artifact && (spec.kind == uar::CorruptionKind::kDisk ||
                      spec.kind == uar::CorruptionKind::kRing))
      throw std::runtime_error("corrupt: use inject-artifact for disk/ring specs");

    const uar::Image input = uar::load_image(artifact ? art_in : cor_in);
    const uar::Image output = uar::corrupt(input, spec);
    uar::save_image_png(output, resolve_out(artifact ? art_out : cor_out));
    if (artifact && !art_mask.empty()) {
      const uar::Mask mask = uar::corruption_mask(spec, input.rows, input.cols);
      uar::Map2 mask_map(mask.rows, mask.cols);
      for (std::size_t i = 0; i < mask_map.v.size(); ++i) mask_map.v[i] = mask.v[i];
      uar::export_float_map(mask_map, resolve_out(art_mask));
    }
    return 0;
  }

  if (cmd_report->parsed()) {
    std::vector<uar::ReportRow> rows;
    for (const auto& row : report_rows) {
      const auto sep = row.find('=');
      if (sep == std::string::npos) throw std::runtime_error("report: --row needs LABEL=PATH");
      const json j = load_json(row.substr(sep + 1));
      const json& metrics = j.contains("metrics") ? j.at("metrics")
                            : j.contains("final_metrics") ? j.at("final_metrics")
                                                          : j;
      rows.push_back({row.substr(0, sep), uar::metric_report_from_json(metrics)});
    }
    const uar::RenderedReport rendered = uar::render_report(rows);
    const fs::path prefix = resolve_out(report_out);
    if (prefix.has_parent_path()) fs::create_directories(prefix.parent_path());
    std::ofstream txt(prefix.string() + ".txt");
    txt << rendered.text;
    std::ofstream mach(prefix.string() + ".json");
    mach << rendered.machine.dump(2) << "\n";
    std::cout << rendered.text;
    return 0;
  }

  if (cmd_synth->parsed()) {
    const auto data = uar::generate_synthetic(synth_n, synth_size, synth_seed);
    uar::write_synthetic_dataset(data, resolve_out(synth_out));
    std::cout << "wrote " << data.size() << " pairs\n";
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    const json err{{"error", {{"type", typeid(e).name()}, {"message", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
