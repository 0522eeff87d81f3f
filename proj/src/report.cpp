#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "uar/harness.hpp"

namespace uar {

namespace {

struct Column {
  const char* name;
  bool higher_is_better;
};

constexpr Column kColumns[] = {
    {"SSIM", true}, {"PSNR", true}, {"LPIPS", false}, {"RRMSE", false}};

double column_value(const MetricReport& m, int col) {
  switch (col) {
    case 0: return m.ssim;
    case 1: return m.psnr;
    case 2: return m.lpips ? *m.lpips : std::nan("");
    case 3: return m.rrmse;
  }
  throw std::logic_error("bad column");
}

std::string format_cell(double value, bool best) {
  char buf[48];
  if (std::isnan(value))
    std::snprintf(buf, sizeof(buf), "-");
  else if (std::isinf(value))
    std::snprintf(buf, sizeof(buf), "%sinf", best ? "*" : "");
  else
    std::snprintf(buf, sizeof(buf), "%s%.4f", best ? "*" : "", value);
  return buf;
}

}  // namespace

RenderedReport render_report(const std::vector<ReportRow>& rows) {
  if (rows.empty()) throw std::domain_error("render_report: need at least one row");

  // best per column; ties flag all tied rows; rows without a value never win
  std::vector<std::vector<bool>> best(rows.size(), std::vector<bool>(4, false));
  for (int col = 0; col < 4; ++col) {
    const bool higher = kColumns[col].higher_is_better;
    double best_val = std::nan("");
    for (const auto& row : rows) {
      const double v = column_value(row.metrics, col);
      if (std::isnan(v)) continue;
      if (std::isnan(best_val) || (higher ? v > best_val : v < best_val)) best_val = v;
    }
    if (std::isnan(best_val)) continue;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (column_value(rows[i].metrics, col) == best_val) best[i][col] = true;
  }

  std::string text;
  char line[256];
  std::snprintf(line, sizeof(line), "%-24s %12s %12s %12s %12s\n", "Approach", "SSIM", "PSNR",
                "LPIPS", "RRMSE");
  text += line;
  text += std::string(76, '-') + "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::snprintf(line, sizeof(line), "%-24s %12s %12s %12s %12s\n", rows[i].label.c_str(),
                  format_cell(column_value(rows[i].metrics, 0), best[i][0]).c_str(),
                  format_cell(column_value(rows[i].metrics, 1), best[i][1]).c_str(),
                  format_cell(column_value(rows[i].metrics, 2), best[i][2]).c_str(),
                  format_cell(column_value(rows[i].metrics, 3), best[i][3]).c_str());
    text += line;
  }
  text += "(* = best in column; SSIM/PSNR higher is better, LPIPS/RRMSE lower)\n";

  nlohmann::json machine = nlohmann::json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    nlohmann::json entry{{"label", rows[i].label}, {"metrics", to_json(rows[i].metrics)}};
    nlohmann::json flags = nlohmann::json::object();
    for (int col = 0; col < 4; ++col) flags[kColumns[col].name] = static_cast<bool>(best[i][col]);
    entry["best"] = flags;
    machine.push_back(entry);
  }
  return {text, machine};
}

}  // namespace uar
