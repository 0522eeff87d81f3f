#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "test_support.hpp"
#include "uar/regularizers.hpp"

using namespace uar;
using namespace uar::testing;

namespace {

RegularizerSpec spec_of(RegKind kind, double eps) {
  RegularizerSpec s;
  s.kind = kind;
  s.epsilon = eps;
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("regularizers");

TEST_CASE("constant maps") {
  const Map2 flat(4, 4, 3.7);
  CHECK(penalty(flat, spec_of(RegKind::kTvIso, 1e-7)) ==
        doctest::Approx(16.0 * 1e-7).epsilon(1e-12));
  CHECK(penalty(flat, spec_of(RegKind::kGradL2Sq, 0.0)) == 0.0);
  CHECK(penalty(flat, spec_of(RegKind::kTvAniso, 0.0)) == 0.0);
}

TEST_CASE("2x2 step map, brute-force enumerated") {
  // [[0,1],[0,1]]: two unit horizontal steps, replicate boundary
  Map2 m(2, 2);
  m.at(0, 0) = 0.0;
  m.at(0, 1) = 1.0;
  m.at(1, 0) = 0.0;
  m.at(1, 1) = 1.0;
  CHECK(penalty(m, spec_of(RegKind::kTvIso, 0.0)) == doctest::Approx(2.0));
  CHECK(penalty(m, spec_of(RegKind::kTvAniso, 0.0)) == doctest::Approx(2.0));
  CHECK(penalty(m, spec_of(RegKind::kGradL2Sq, 0.0)) == doctest::Approx(2.0));
}

TEST_CASE("nonnegativity and zero iff constant at eps 0") {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const Map2 m = random_map(5, 6, -2.0, 2.0, rng);
    for (RegKind kind : {RegKind::kTvIso, RegKind::kGradL2Sq, RegKind::kTvAniso}) {
      const double p = penalty(m, spec_of(kind, 0.0));
      CHECK(p >= 0.0);
      CHECK(p > 0.0);  // random maps are nonconstant almost surely
    }
  }
  const Map2 flat(5, 6, 0.123);
  for (RegKind kind : {RegKind::kTvIso, RegKind::kGradL2Sq, RegKind::kTvAniso})
    CHECK(penalty(flat, spec_of(kind, 0.0)) == 0.0);
}

TEST_CASE("translation invariance") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Map2 m = random_map(6, 4, -1.0, 1.0, rng);
    Map2 shifted = m;
    const double c = rng.uniform(-5.0, 5.0);
    for (double& x : shifted.v) x += c;
    for (RegKind kind : {RegKind::kTvIso, RegKind::kGradL2Sq, RegKind::kTvAniso}) {
      const auto spec = spec_of(kind, 1e-7);
      CHECK(std::abs(penalty(m, spec) - penalty(shifted, spec)) < 1e-9);
    }
  }
}

TEST_CASE("homogeneity at eps 0") {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Map2 m = random_map(5, 5, -1.0, 1.0, rng);
    const double c = rng.uniform(-3.0, 3.0);
    Map2 scaled = m;
    for (double& x : scaled.v) x *= c;

    CHECK(std::abs(penalty(scaled, spec_of(RegKind::kTvIso, 0.0)) -
                   std::abs(c) * penalty(m, spec_of(RegKind::kTvIso, 0.0))) < 1e-9);
    CHECK(std::abs(penalty(scaled, spec_of(RegKind::kTvAniso, 0.0)) -
                   std::abs(c) * penalty(m, spec_of(RegKind::kTvAniso, 0.0))) < 1e-9);
    CHECK(std::abs(penalty(scaled, spec_of(RegKind::kGradL2Sq, 0.0)) -
                   c * c * penalty(m, spec_of(RegKind::kGradL2Sq, 0.0))) < 1e-9);
  }
}

TEST_CASE("norm sandwich tv_iso <= tv_aniso <= sqrt(2) tv_iso at eps 0") {
  Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const Map2 m = random_map(4 + static_cast<int>(rng.below(5)),
                              4 + static_cast<int>(rng.below(5)), -2.0, 2.0, rng);
    const double iso = penalty(m, spec_of(RegKind::kTvIso, 0.0));
    const double aniso = penalty(m, spec_of(RegKind::kTvAniso, 0.0));
    CHECK(iso <= aniso + 1e-9);
    CHECK(aniso <= std::sqrt(2.0) * iso + 1e-9);
  }
}

TEST_CASE("gradient of constant map is zero for grad_l2sq") {
  const Map2 flat(6, 6, 1.0);
  const Map2 g = penalty_gradient(flat, spec_of(RegKind::kGradL2Sq, 0.0));
  for (double x : g.v) CHECK(x == 0.0);
}

TEST_CASE("gradients match central finite differences") {
  Rng rng(11);
  for (RegKind kind : {RegKind::kTvIso, RegKind::kGradL2Sq, RegKind::kTvAniso}) {
    const auto spec = spec_of(kind, kind == RegKind::kGradL2Sq ? 0.0 : 1e-7);
    for (int trial = 0; trial < 10; ++trial) {
      const Map2 m = random_map(8, 8, -1.0, 1.0, rng);
      const Map2 g = penalty_gradient(m, spec);
      for (int check = 0; check < 6; ++check) {
        const std::size_t j = rng.below(m.v.size());
        auto eval = [&](double x) {
          Map2 mm = m;
          mm.v[j] = x;
          return penalty(mm, spec);
        };
        CHECK(grad_err(g.v[j], central_diff(eval, m.v[j])) < 1e-4);
      }
    }
  }
}

TEST_CASE("gradient is translation invariant") {
  Rng rng(12);
  const Map2 m = random_map(5, 7, -1.0, 1.0, rng);
  Map2 shifted = m;
  for (double& x : shifted.v) x += 2.5;
  for (RegKind kind : {RegKind::kTvIso, RegKind::kGradL2Sq, RegKind::kTvAniso}) {
    const auto spec = spec_of(kind, 1e-7);
    const Map2 ga = penalty_gradient(m, spec);
    const Map2 gb = penalty_gradient(shifted, spec);
    for (std::size_t i = 0; i < ga.v.size(); ++i) CHECK(ga.v[i] == doctest::Approx(gb.v[i]));
  }
}

TEST_CASE("activation gate") {
  CHECK_FALSE(regularizer_active(0, 5));
  CHECK_FALSE(regularizer_active(4, 5));
  CHECK(regularizer_active(5, 5));
  CHECK(regularizer_active(17, 5));
  CHECK(regularizer_active(0, 0));
  CHECK_THROWS_AS(regularizer_active(-1, 5), std::domain_error);
}

TEST_CASE("input validation") {
  Map2 bad(2, 2, 0.0);
  bad.v[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(penalty(bad, RegularizerSpec{}), std::domain_error);

  RegularizerSpec neg_eps;
  neg_eps.epsilon = -1.0;
  CHECK_THROWS_AS(penalty(Map2(2, 2, 0.0), neg_eps), std::domain_error);
}

TEST_SUITE_END();
