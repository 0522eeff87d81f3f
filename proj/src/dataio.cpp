#include "uar/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <nlohmann/json.hpp>

#include "uar/errors.hpp"
#include "uar/rng.hpp"

namespace fs = std::filesystem;

namespace uar {

namespace {

inline double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

Image from_cv(const cv::Mat& m) {
  cv::Mat f;
  const int depth = m.depth();
  double scale = 1.0 / 255.0;
  if (depth == CV_16U) scale = 1.0 / 65535.0;
  if (depth == CV_32F || depth == CV_64F) scale = 1.0;
  m.convertTo(f, CV_64F, scale);

  Image out(f.rows, f.cols, f.channels());
  for (int r = 0; r < f.rows; ++r) {
    const double* row = f.ptr<double>(r);
    for (int c = 0; c < f.cols; ++c)
      for (int ch = 0; ch < out.channels; ++ch) {
        // OpenCV is BGR; store RGB
        const int src_ch = out.channels == 3 ? 2 - ch : ch;
        out.at(ch, r, c) = clamp01(row[c * out.channels + src_ch]);
      }
  }
  return out;
}

cv::Mat to_cv_u8(const Image& img) {
  cv::Mat m(img.rows, img.cols, CV_8UC(img.channels));
  for (int r = 0; r < img.rows; ++r) {
    std::uint8_t* row = m.ptr<std::uint8_t>(r);
    for (int c = 0; c < img.cols; ++c)
      for (int ch = 0; ch < img.channels; ++ch) {
        const int dst_ch = img.channels == 3 ? 2 - ch : ch;
        row[c * img.channels + dst_ch] =
            static_cast<std::uint8_t>(std::lround(clamp01(img.at(ch, r, c)) * 255.0));
      }
  }
  return m;
}

}  // namespace

LoadReport load_paired_dir(const fs::path& root) {
  const fs::path dir_a = root / "A";
  const fs::path dir_b = root / "B";
  LoadReport report;
  if (!fs::exists(dir_a) && !fs::exists(dir_b)) return report;

  auto list_files = [](const fs::path& dir) {
    std::map<std::string, fs::path> files;  // byte-wise basename sort
    if (!fs::exists(dir)) return files;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.is_regular_file()) files.emplace(entry.path().filename().string(), entry.path());
    return files;
  };

  const auto files_a = list_files(dir_a);
  const auto files_b = list_files(dir_b);

  for (const auto& [name, path_a] : files_a) {
    auto it = files_b.find(name);
    if (it == files_b.end()) {
      report.orphans.push_back("A/" + name);
      continue;
    }
    PairedSample s;
    s.id = name;
    s.x_a = load_image(path_a);
    s.x_b = load_image(it->second);
    report.samples.push_back(std::move(s));
  }
  for (const auto& [name, path_b] : files_b)
    if (!files_a.count(name)) report.orphans.push_back("B/" + name);
  return report;
}

SplitResult split(const std::vector<PairedSample>& samples, const std::array<double, 3>& fractions,
                  std::uint64_t seed) {
  double sum = 0.0;
  for (double f : fractions) {
    if (!(f >= 0.0)) throw std::domain_error("split: fractions must be >= 0");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::domain_error("split: fractions must sum to 1");

  std::vector<std::size_t> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  shuffle(order, rng);

  const auto n = static_cast<double>(samples.size());
  const std::size_t n_train = static_cast<std::size_t>(std::llround(fractions[0] * n));
  const std::size_t n_val =
      static_cast<std::size_t>(std::llround((fractions[0] + fractions[1]) * n)) - n_train;

  SplitResult out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const PairedSample& s = samples[order[i]];
    if (i < n_train)
      out.train.push_back(s);
    else if (i < n_train + n_val)
      out.val.push_back(s);
    else
      out.test.push_back(s);
  }
  return out;
}

// --------------------------------------------------------------------
// Synthetic generator
// --------------------------------------------------------------------

namespace {

// Row-stochastic channel mixing followed by per-channel gamma; both fixed.
constexpr double kMix[3][3] = {
    {0.60, 0.25, 0.15},
    {0.20, 0.65, 0.15},
    {0.10, 0.30, 0.60},
};
constexpr double kGamma[3] = {0.8, 1.0, 1.25};
constexpr double kSqueezeLo = 0.15;
constexpr double kSqueezeHi = 0.85;

constexpr double kVarLo = 1e-5;
constexpr double kVarHi = 9e-4;

Map2 box_blur(const Map2& m, int radius) {
  Map2 tmp(m.rows, m.cols), out(m.rows, m.cols);
  const double inv = 1.0 / (2 * radius + 1);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += m.at(r, std::clamp(c + i, 0, m.cols - 1));
      tmp.at(r, c) = acc * inv;
    }
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += tmp.at(std::clamp(r + i, 0, m.rows - 1), c);
      out.at(r, c) = acc * inv;
    }
  return out;
}

double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

Image make_source_image(std::uint64_t content_seed, int size) {
  Rng rng(content_seed);
  Image x(size, size, 3);

  // smooth base: a few random 2D cosines, shared across channels with
  // small per-channel offsets
  const int n_waves = 4;
  std::vector<double> fu(n_waves), fv(n_waves), ph(n_waves), amp(n_waves);
  for (int k = 0; k < n_waves; ++k) {
    fu[k] = rng.uniform(0.5, 3.0) / size;
    fv[k] = rng.uniform(0.5, 3.0) / size;
    ph[k] = rng.uniform(0.0, 6.283185307179586);
    amp[k] = rng.uniform(0.05, 0.15);
  }
  std::array<double, 3> ch_offset = {rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05),
                                     rng.uniform(-0.05, 0.05)};
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) {
      double base = 0.45;
      for (int k = 0; k < n_waves; ++k)
        base += amp[k] * std::cos(6.283185307179586 * (fu[k] * r + fv[k] * c) + ph[k]);
      for (int ch = 0; ch < 3; ++ch) x.at(ch, r, c) = base + ch_offset[ch];
    }

  // geometric shapes: filled disks and axis-aligned rectangles with
  // random per-channel intensities
  const int n_shapes = 3 + static_cast<int>(rng.below(4));
  for (int s = 0; s < n_shapes; ++s) {
    const bool is_disk = rng.bernoulli(0.5);
    std::array<double, 3> color = {rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9),
                                   rng.uniform(0.1, 0.9)};
    if (is_disk) {
      const double cy = rng.uniform(0.15, 0.85) * size;
      const double cx = rng.uniform(0.15, 0.85) * size;
      const double rad = rng.uniform(0.08, 0.22) * size;
      for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c)
          if ((r - cy) * (r - cy) + (c - cx) * (c - cx) <= rad * rad)
            for (int ch = 0; ch < 3; ++ch) x.at(ch, r, c) = color[ch];
    } else {
      const int r0 = static_cast<int>(rng.uniform(0.05, 0.7) * size);
      const int c0 = static_cast<int>(rng.uniform(0.05, 0.7) * size);
      const int h = static_cast<int>(rng.uniform(0.1, 0.3) * size);
      const int w = static_cast<int>(rng.uniform(0.1, 0.3) * size);
      for (int r = r0; r < std::min(size, r0 + h); ++r)
        for (int c = c0; c < std::min(size, c0 + w); ++c)
          for (int ch = 0; ch < 3; ++ch) x.at(ch, r, c) = color[ch];
    }
  }

  for (double& p : x.v) p = std::clamp(p, 0.05, 0.95);
  return x;
}

}  // namespace

Image synthetic_transform(const Image& x_a) {
  if (x_a.channels != 3) throw std::invalid_argument("synthetic_transform: expects 3 channels");
  Image out(x_a.rows, x_a.cols, 3);
  for (int r = 0; r < x_a.rows; ++r)
    for (int c = 0; c < x_a.cols; ++c)
      for (int ch = 0; ch < 3; ++ch) {
        double z = 0.0;
        for (int j = 0; j < 3; ++j) z += kMix[ch][j] * x_a.at(j, r, c);
        out.at(ch, r, c) = kSqueezeLo + (kSqueezeHi - kSqueezeLo) * std::pow(z, kGamma[ch]);
      }
  return out;
}

Map2 synthetic_noise_field(const Image& x_a) {
  Map2 luma(x_a.rows, x_a.cols);
  const double inv_c = 1.0 / x_a.channels;
  for (int r = 0; r < x_a.rows; ++r)
    for (int c = 0; c < x_a.cols; ++c) {
      double acc = 0.0;
      for (int ch = 0; ch < x_a.channels; ++ch) acc += x_a.at(ch, r, c);
      luma.at(r, c) = acc * inv_c;
    }
  Map2 smooth = box_blur(box_blur(luma, 2), 2);
  Map2 field(x_a.rows, x_a.cols);
  for (std::size_t i = 0; i < field.v.size(); ++i) {
    const double t = smoothstep((smooth.v[i] - 0.35) / 0.4);
    field.v[i] = kVarLo + (kVarHi - kVarLo) * t;
  }
  return field;
}

SyntheticTruth make_synthetic_sample(std::uint64_t content_seed, std::uint64_t noise_seed,
                                     int size) {
  if (size < 16) throw std::domain_error("make_synthetic_sample: size must be >= 16");
  SyntheticTruth out;
  out.sample.x_a = make_source_image(content_seed, size);
  out.sample.x_b = synthetic_transform(out.sample.x_a);
  out.noise_variance = synthetic_noise_field(out.sample.x_a);

  Rng noise(noise_seed);
  for (int ch = 0; ch < 3; ++ch)
    for (int r = 0; r < size; ++r)
      for (int c = 0; c < size; ++c) {
        const double stddev = std::sqrt(out.noise_variance.at(r, c));
        double& p = out.sample.x_b.at(ch, r, c);
        p = clamp01(p + noise.normal(0.0, stddev));
      }
  return out;
}

std::vector<SyntheticTruth> generate_synthetic(int n, int size, std::uint64_t seed) {
  if (n < 1) throw std::domain_error("generate_synthetic: n must be >= 1");
  std::vector<SyntheticTruth> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t content = Rng::mix(seed, 2 * static_cast<std::uint64_t>(i));
    const std::uint64_t noise = Rng::mix(seed, 2 * static_cast<std::uint64_t>(i) + 1);
    SyntheticTruth t = make_synthetic_sample(content, noise, size);
    char id[32];
    std::snprintf(id, sizeof(id), "synth_%05d", i);
    t.sample.id = id;
    out.push_back(std::move(t));
  }
  return out;
}

// --------------------------------------------------------------------
// Float-map I/O
// --------------------------------------------------------------------

void export_float_map(const Map2& map, const fs::path& path) {
  if (!all_finite(map.v)) throw std::domain_error("export_float_map: map must be finite");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("export_float_map: cannot open " + path.string());

  out << "{\"h\":" << map.rows << ",\"w\":" << map.cols << ",\"dtype\":\"f32\"}\n";
  std::vector<float> buf(map.v.size());
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = static_cast<float>(map.v[i]);
  // files are little-endian; this writes raw IEEE floats (LE hosts only,
  // which covers every supported platform here)
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!out) throw std::runtime_error("export_float_map: write failed for " + path.string());
  out.close();

  fs::path preview = path;
  preview += ".png";
  save_map_preview(map, preview);
}

Map2 import_float_map(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("import_float_map: cannot open " + path.string());

  std::string header;
  if (!std::getline(in, header)) throw FormatError("import_float_map: missing header line", 0);

  nlohmann::json j = nlohmann::json::parse(header, nullptr, false);
  if (j.is_discarded() || !j.contains("h") || !j.contains("w") || !j.contains("dtype"))
    throw FormatError("import_float_map: malformed header", 0);
  if (j["dtype"] != "f32")
    throw FormatError("import_float_map: unsupported dtype " + j["dtype"].dump(), 0);

  const int h = j["h"].get<int>();
  const int w = j["w"].get<int>();
  if (h < 0 || w < 0) throw FormatError("import_float_map: negative dimensions", 0);

  const std::size_t header_len = header.size() + 1;
  const std::size_t expected = static_cast<std::size_t>(h) * w;
  std::vector<float> buf(expected);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(expected * sizeof(float)));
  if (static_cast<std::size_t>(in.gcount()) != expected * sizeof(float))
    throw FormatError("import_float_map: payload shorter than h*w declared in header",
                      header_len + static_cast<std::size_t>(in.gcount()));
  char extra;
  if (in.read(&extra, 1))
    throw FormatError("import_float_map: trailing bytes after payload",
                      header_len + expected * sizeof(float));

  Map2 out(h, w);
  for (std::size_t i = 0; i < expected; ++i) out.v[i] = static_cast<double>(buf[i]);
  return out;
}

// --------------------------------------------------------------------
// PNG helpers
// --------------------------------------------------------------------

void save_image_png(const Image& img, const fs::path& path) {
  if (!cv::imwrite(path.string(), to_cv_u8(img)))
    throw std::runtime_error("save_image_png: write failed for " + path.string());
}

Image load_image(const fs::path& path) {
  cv::Mat m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (m.empty()) throw std::runtime_error("load_image: cannot decode " + path.string());
  if (m.channels() == 4) cv::cvtColor(m, m, cv::COLOR_BGRA2BGR);
  return from_cv(m);
}

namespace {

// 16-stop viridis ramp (perceptually uniform), linearly interpolated.
constexpr double kViridis[16][3] = {
    {0.2670, 0.0049, 0.3294}, {0.2827, 0.1002, 0.4222}, {0.2771, 0.1852, 0.4899},
    {0.2539, 0.2653, 0.5300}, {0.2220, 0.3392, 0.5488}, {0.1906, 0.4071, 0.5561},
    {0.1636, 0.4711, 0.5581}, {0.1391, 0.5338, 0.5553}, {0.1206, 0.5964, 0.5436},
    {0.1347, 0.6586, 0.5176}, {0.2080, 0.7187, 0.4729}, {0.3278, 0.7740, 0.4066},
    {0.4775, 0.8214, 0.3182}, {0.6473, 0.8584, 0.2099}, {0.8249, 0.8847, 0.1062},
    {0.9932, 0.9062, 0.1439}};

}  // namespace

void save_map_preview(const Map2& map, const fs::path& path) {
  double lo = map.v.empty() ? 0.0 : map.v[0];
  double hi = lo;
  for (double x : map.v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  const double range = hi - lo;

  Image rgb(map.rows, map.cols, 3);
  for (int r = 0; r < map.rows; ++r)
    for (int c = 0; c < map.cols; ++c) {
      const double t = range > 0.0 ? (map.at(r, c) - lo) / range : 0.0;
      const double pos = t * 15.0;
      const int i0 = std::min(14, static_cast<int>(pos));
      const double f = pos - i0;
      for (int ch = 0; ch < 3; ++ch)
        rgb.at(ch, r, c) = kViridis[i0][ch] * (1.0 - f) + kViridis[i0 + 1][ch] * f;
    }
  save_image_png(rgb, path);
}

void write_synthetic_dataset(const std::vector<SyntheticTruth>& data, const fs::path& dir) {
  fs::create_directories(dir / "A");
  fs::create_directories(dir / "B");
  fs::create_directories(dir / "truth");

  nlohmann::json manifest = nlohmann::json::array();
  for (const auto& t : data) {
    save_image_png(t.sample.x_a, dir / "A" / (t.sample.id + ".png"));
    save_image_png(t.sample.x_b, dir / "B" / (t.sample.id + ".png"));
    export_float_map(t.noise_variance, dir / "truth" / (t.sample.id + "_variance.fmap"));
    manifest.push_back(t.sample.id);
  }
  std::ofstream out(dir / "manifest.json");
  out << manifest.dump(2) << "\n";
}

}  // namespace uar
