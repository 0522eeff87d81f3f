#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "uar/harness.hpp"

namespace uar {

namespace {

constexpr char kMagic[8] = {'U', 'A', 'R', 'C', 'K', 'P', 'T', '1'};

template <class T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void read_pod(std::ifstream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint: truncated file");
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, net::UnetGenerator<float>& gen,
                     int image_size) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path.string());
  out.write(kMagic, sizeof(kMagic));

  const auto& opt = gen.options();
  const std::uint64_t fp = fnv1a64(gen.arch_string(image_size));
  write_pod(out, fp);
  write_pod(out, static_cast<std::int32_t>(image_size));
  write_pod(out, static_cast<std::int32_t>(opt.in_channels));
  write_pod(out, static_cast<std::int32_t>(opt.out_channels));
  write_pod(out, static_cast<std::int32_t>(opt.base_width));
  write_pod(out, opt.alpha_min);
  write_pod(out, opt.beta_min);

  std::uint64_t total = 0;
  for (const auto& p : gen.params()) total += p.size;
  write_pod(out, total);
  for (const auto& p : gen.params())
    out.write(reinterpret_cast<const char*>(p.values),
              static_cast<std::streamsize>(p.size * sizeof(float)));
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path.string());
}

LoadedGenerator load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path.string());

  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("checkpoint: bad magic in " + path.string());

  std::uint64_t stored_fp = 0;
  std::int32_t image_size = 0, in_c = 0, out_c = 0, base = 0;
  double alpha_min = 0, beta_min = 0;
  read_pod(in, stored_fp);
  read_pod(in, image_size);
  read_pod(in, in_c);
  read_pod(in, out_c);
  read_pod(in, base);
  read_pod(in, alpha_min);
  read_pod(in, beta_min);

  net::UnetGenerator<float>::Options opt;
  opt.in_channels = in_c;
  opt.out_channels = out_c;
  opt.base_width = base;
  opt.alpha_min = alpha_min;
  opt.beta_min = beta_min;

  Rng dummy(0);
  LoadedGenerator loaded{net::UnetGenerator<float>(opt, dummy), image_size, stored_fp};

  const std::uint64_t expected_fp = fnv1a64(loaded.generator.arch_string(image_size));
  if (expected_fp != stored_fp) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "checkpoint: architecture fingerprint mismatch (stored %016llx, expected %016llx)",
                  static_cast<unsigned long long>(stored_fp),
                  static_cast<unsigned long long>(expected_fp));
    throw std::runtime_error(msg);
  }

  std::uint64_t total = 0;
  read_pod(in, total);
  std::uint64_t have = 0;
  for (const auto& p : loaded.generator.params()) have += p.size;
  if (have != total)
    throw std::runtime_error("checkpoint: weight count mismatch in " + path.string());
  for (const auto& p : loaded.generator.params()) {
    in.read(reinterpret_cast<char*>(p.values), static_cast<std::streamsize>(p.size * sizeof(float)));
    if (!in) throw std::runtime_error("checkpoint: truncated weights in " + path.string());
  }
  return loaded;
}

}  // namespace uar
