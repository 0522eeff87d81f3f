#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "test_support.hpp"
#include "uar/corruptions.hpp"

using namespace uar;
using namespace uar::testing;

TEST_SUITE_BEGIN("corruptions");

TEST_CASE("no-op specs are identities") {
  Rng rng(21);
  const Image x = random_image(8, 8, 3, 0.1, 0.9, rng);

  CHECK(corrupt(x, CorruptionSpec::gaussian(0.0, 1)).v == x.v);
  CHECK(corrupt(x, CorruptionSpec::uniform(0.0, 0.0, 1)).v == x.v);
  CHECK(corrupt(x, CorruptionSpec::impulse(0.0, 1)).v == x.v);
  CHECK(corrupt(x, CorruptionSpec::disk(4, 4, 0.0, 0.5)).v == x.v);
}

TEST_CASE("impulse p=1 sets every pixel to pure black or white") {
  const Image x(6, 6, 3, 0.5);
  const Image y = corrupt(x, CorruptionSpec::impulse(1.0, 3));
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) {
      const double v = y.at(0, r, c);
      CHECK((v == 0.0 || v == 1.0));
      // whole pixel shares the value across channels
      CHECK(y.at(1, r, c) == v);
      CHECK(y.at(2, r, c) == v);
    }
}

TEST_CASE("impulse corruption rate is binomial-consistent") {
  // 10^6 pixels at p=0.01: observed fraction within 3 binomial sigma
  const int side = 1000;
  const Image x(side, side, 1, 0.5);
  const double p = 0.01;
  const Image y = corrupt(x, CorruptionSpec::impulse(p, 12345));
  long long corrupted = 0;
  for (double v : y.v)
    if (v != 0.5) ++corrupted;
  const double n = static_cast<double>(side) * side;
  const double sigma = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(corrupted / n - p) < 3.0 * sigma);
}

TEST_CASE("outputs stay in range and preserve shape") {
  Rng rng(22);
  const Image x = random_image(16, 16, 3, 0.0, 1.0, rng);
  for (const auto& spec :
       {CorruptionSpec::gaussian(0.05, 7), CorruptionSpec::uniform(-0.3, 0.3, 7),
        CorruptionSpec::impulse(0.2, 7), CorruptionSpec::disk(8, 8, 5, 0.9),
        CorruptionSpec::ring(8, 8, 3, 6, 0.1)}) {
    const Image y = corrupt(x, spec);
    CHECK(y.same_shape(x));
    for (double v : y.v) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("determinism in the seed, variation across seeds") {
  Rng rng(23);
  const Image x = random_image(12, 12, 3, 0.2, 0.8, rng);
  const auto spec = CorruptionSpec::gaussian(0.01, 99);
  CHECK(corrupt(x, spec).v == corrupt(x, spec).v);

  auto other = spec;
  other.seed = 100;
  CHECK(corrupt(x, spec).v != corrupt(x, other).v);
}

TEST_CASE("gaussian noise scale roughly matches the requested variance") {
  const Image x(64, 64, 3, 0.5);
  const double var = 0.001;
  const Image y = corrupt(x, CorruptionSpec::gaussian(var, 5));
  double acc = 0.0;
  for (std::size_t i = 0; i < y.v.size(); ++i) {
    const double d = y.v[i] - x.v[i];
    acc += d * d;
  }
  const double observed = acc / static_cast<double>(y.v.size());
  CHECK(observed == doctest::Approx(var).epsilon(0.1));
}

TEST_CASE("disk mask geometry") {
  CHECK_THROWS_AS(corruption_mask(CorruptionSpec::gaussian(0.1, 0), 8, 8), std::invalid_argument);

  // radius 0: all false
  const Mask empty = corruption_mask(CorruptionSpec::disk(4, 4, 0.0, 0.5), 8, 8);
  for (auto b : empty.v) CHECK(b == 0);

  // disk covering the whole image: all true
  const Mask full = corruption_mask(CorruptionSpec::disk(4, 4, 100.0, 0.5), 8, 8);
  for (auto b : full.v) CHECK(b == 1);

  // area of a centered disk approximates pi r^2 for r >= 10
  for (double radius : {10.0, 15.0, 25.0}) {
    const int side = 128;
    const Mask m = corruption_mask(CorruptionSpec::disk(64, 64, radius, 0.5), side, side);
    long long count = 0;
    for (auto b : m.v) count += b;
    const double ratio = static_cast<double>(count) / (3.14159265358979323846 * radius * radius);
    CHECK(ratio > 0.95);
    CHECK(ratio < 1.05);
  }
}

TEST_CASE("ring mask is an annulus") {
  const Mask m = corruption_mask(CorruptionSpec::ring(16, 16, 5, 9, 0.5), 32, 32);
  for (int r = 0; r < 32; ++r)
    for (int c = 0; c < 32; ++c) {
      const double dist = std::sqrt((r - 16.0) * (r - 16.0) + (c - 16.0) * (c - 16.0));
      CHECK(static_cast<bool>(m.at(r, c)) == (dist >= 5.0 && dist <= 9.0));
    }
}

TEST_CASE("artifacts overwrite exactly the masked region") {
  Rng rng(24);
  const Image x = random_image(32, 32, 3, 0.2, 0.8, rng);
  const auto spec = CorruptionSpec::ring(16, 16, 4, 8, 0.9);
  const Image y = corrupt(x, spec);
  const Mask m = corruption_mask(spec, 32, 32);
  for (int r = 0; r < 32; ++r)
    for (int c = 0; c < 32; ++c)
      for (int ch = 0; ch < 3; ++ch) {
        if (m.at(r, c))
          CHECK(y.at(ch, r, c) == 0.9);
        else
          CHECK(y.at(ch, r, c) == x.at(ch, r, c));
      }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(validate(CorruptionSpec::gaussian(-0.1, 0)), std::domain_error);
  CHECK_THROWS_AS(validate(CorruptionSpec::uniform(0.5, 0.1, 0)), std::domain_error);
  CHECK_THROWS_AS(validate(CorruptionSpec::impulse(1.5, 0)), std::domain_error);
  CHECK_THROWS_AS(validate(CorruptionSpec::disk(0, 0, -1, 0.5)), std::domain_error);
  CHECK_THROWS_AS(validate(CorruptionSpec::ring(0, 0, 5, 5, 0.5)), std::domain_error);
  CHECK_THROWS_AS(validate(CorruptionSpec::disk(0, 0, 3, 1.5)), std::domain_error);
}

TEST_SUITE_END();
