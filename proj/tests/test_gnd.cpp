#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "test_support.hpp"
#include "uar/gnd.hpp"
#include "uar/special.hpp"

using namespace uar;
using namespace uar::testing;

namespace {

Image single_pixel(double r) {
  Image img(1, 1, 1);
  img.v[0] = r;
  return img;
}

GndParams single_params(double alpha, double beta) {
  GndParams p;
  p.alpha = Map2(1, 1, alpha);
  p.beta = Map2(1, 1, beta);
  return p;
}

double nll_scalar(double r, double alpha, double beta) {
  return gnd_nll(single_pixel(r), single_params(alpha, beta), Reduction::kSum).total;
}

}  // namespace

TEST_SUITE_BEGIN("gnd");

TEST_CASE("digamma matches reference values") {
  // scipy.special.digamma
  CHECK(rel_err(digamma(0.1), -10.423754940411076) < 1e-11);
  CHECK(rel_err(digamma(0.35), -2.9710708698259456) < 1e-11);
  CHECK(rel_err(digamma(0.5), -1.9635100260214235) < 1e-11);
  CHECK(rel_err(digamma(1.0), -0.5772156649015329) < 1e-11);
  CHECK(rel_err(digamma(2.5), 0.7031566406452432) < 1e-11);
  CHECK(rel_err(digamma(7.3), 1.917820335637986) < 1e-11);
  CHECK(rel_err(digamma(15.0), 2.6743466616607936) < 1e-11);
}

TEST_CASE("per-pixel NLL closed-form values") {
  // (1/1)^1 - log 1 + log Gamma(1) = 1
  CHECK(nll_scalar(1.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
  // -log 2 + log Gamma(1/2), reference gamma evaluation
  CHECK(nll_scalar(0.0, 1.0, 2.0) == doctest::Approx(-0.12078223763524532).epsilon(1e-9));
  // scalar oracle value computed with reference lgamma ahead of the build
  CHECK(nll_scalar(0.5, 2.0, 1.5) == doctest::Approx(0.7158323475996795).epsilon(1e-9));
}

TEST_CASE("gaussian NLL values") {
  Map2 s2_1(1, 1, 1.0);
  CHECK(gaussian_nll(single_pixel(0.0), s2_1, Reduction::kSum).total == doctest::Approx(0.0));
  CHECK(gaussian_nll(single_pixel(1.0), s2_1, Reduction::kSum).total == doctest::Approx(0.5));
  Map2 s2_4(1, 1, 4.0);
  CHECK(gaussian_nll(single_pixel(2.0), s2_4, Reduction::kSum).total ==
        doctest::Approx(1.1931471805599454).epsilon(1e-12));
}

TEST_CASE("variance closed forms") {
  CHECK(gnd_variance(single_params(1.0, 2.0)).v[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(gnd_variance(single_params(1.0, 1.0)).v[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(gnd_variance(single_params(2.0, 2.0)).v[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("gaussian reduction identity on random maps") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int rows = 3 + static_cast<int>(rng.below(6));
    const int cols = 3 + static_cast<int>(rng.below(6));
    const Image r = random_image(rows, cols, 1, -1.0, 1.0, rng);
    GndParams p;
    p.alpha = random_map(rows, cols, 0.2, 2.5, rng);
    p.beta = Map2(rows, cols, 2.0);
    Map2 sigma2(rows, cols);
    for (std::size_t i = 0; i < sigma2.v.size(); ++i)
      sigma2.v[i] = p.alpha.v[i] * p.alpha.v[i] / 2.0;

    const double gnd = gnd_nll(r, p, Reduction::kSum).total;
    const double gauss = gaussian_nll(r, sigma2, Reduction::kSum).total;
    const double expected = rows * cols * 0.5 * std::log(3.14159265358979323846 / 2.0);
    CHECK(rel_err(gnd - gauss, expected) < 1e-6);
  }
}

TEST_CASE("variance consistency with the gaussian parameterization") {
  Rng rng(42);
  GndParams p;
  p.alpha = random_map(5, 7, 0.1, 3.0, rng);
  p.beta = Map2(5, 7, 2.0);
  const Map2 var = gnd_variance(p);
  for (std::size_t i = 0; i < var.v.size(); ++i)
    CHECK(rel_err(var.v[i], p.alpha.v[i] * p.alpha.v[i] / 2.0) < 1e-12);
}

TEST_CASE("scale covariance") {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const int rows = 4, cols = 4;
    Image r = random_image(rows, cols, 1, 0.05, 1.0, rng);
    if (rng.bernoulli(0.5))
      for (double& x : r.v) x = -x;
    GndParams p;
    p.alpha = random_map(rows, cols, 0.2, 2.0, rng);
    p.beta = random_map(rows, cols, 0.4, 4.0, rng);
    const double c = rng.uniform(0.3, 3.0);

    Image rc = r;
    for (double& x : rc.v) x *= c;
    GndParams pc = p;
    for (double& a : pc.alpha.v) a *= c;

    const double base = gnd_nll(r, p, Reduction::kSum).total;
    const double scaled = gnd_nll(rc, pc, Reduction::kSum).total;
    CHECK(rel_err(scaled, base + rows * cols * std::log(c)) < 1e-6);
  }
}

TEST_CASE("per-pixel NLL is nondecreasing in |r|; variance increasing in alpha") {
  Rng rng(44);
  for (int trial = 0; trial < 10; ++trial) {
    const double alpha = rng.uniform(0.2, 2.0);
    const double beta = rng.uniform(kBetaMin, 4.0);
    double prev = nll_scalar(0.0, alpha, beta);
    for (double r = 0.05; r <= 2.0; r += 0.05) {
      const double cur = nll_scalar(r, alpha, beta);
      CHECK(cur >= prev - 1e-12);
      prev = cur;
    }
    double prev_var = gnd_variance(single_params(0.05, beta)).v[0];
    for (double a = 0.1; a <= 2.0; a += 0.05) {
      const double var = gnd_variance(single_params(a, beta)).v[0];
      CHECK(var > prev_var);
      prev_var = var;
    }
  }
}

TEST_CASE("reduction flag") {
  Rng rng(45);
  const Image r = random_image(6, 5, 1, -1.0, 1.0, rng);
  GndParams p;
  p.alpha = random_map(6, 5, 0.3, 2.0, rng);
  p.beta = random_map(6, 5, 0.5, 3.0, rng);
  const auto sum = gnd_nll(r, p, Reduction::kSum);
  const auto mean = gnd_nll(r, p, Reduction::kMean);
  CHECK(rel_err(mean.total, sum.total / 30.0) < 1e-12);
}

TEST_CASE("multi-channel residuals reduce to the channel mean of |r|") {
  Rng rng(46);
  const Image r3 = random_image(4, 4, 3, -1.0, 1.0, rng);
  Image r1(4, 4, 1);
  for (int rr = 0; rr < 4; ++rr)
    for (int cc = 0; cc < 4; ++cc)
      r1.at(0, rr, cc) = (std::abs(r3.at(0, rr, cc)) + std::abs(r3.at(1, rr, cc)) +
                          std::abs(r3.at(2, rr, cc))) / 3.0;
  GndParams p;
  p.alpha = random_map(4, 4, 0.3, 2.0, rng);
  p.beta = random_map(4, 4, 0.5, 3.0, rng);
  CHECK(rel_err(gnd_nll(r3, p, Reduction::kSum).total, gnd_nll(r1, p, Reduction::kSum).total) <
        1e-12);
}

TEST_CASE("hand-derived gradient values") {
  // d/dalpha[(r/alpha)^beta - log(beta/alpha)] at r=1,alpha=1,beta=2 is -1
  const auto g = gnd_nll_gradients(single_pixel(1.0), single_params(1.0, 2.0));
  CHECK(g.d_alpha.v[0] == doctest::Approx(-1.0).epsilon(1e-9));

  // even function: zero residual gradient at r=0 for beta >= 1
  const auto g0 = gnd_nll_gradients(single_pixel(0.0), single_params(1.0, 2.0));
  CHECK(g0.d_residual.v[0] == 0.0);
}

TEST_CASE("gradients match central finite differences") {
  Rng rng(47);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double r = (rng.bernoulli(0.5) ? 1.0 : -1.0) * rng.uniform(0.05, 1.5);
    const double alpha = rng.uniform(0.2, 2.5);
    const double beta = rng.uniform(0.3, 4.0);
    const auto g = gnd_nll_gradients(single_pixel(r), single_params(alpha, beta));

    const double fd_r = central_diff([&](double x) { return nll_scalar(x, alpha, beta); }, r);
    const double fd_a = central_diff([&](double a) { return nll_scalar(r, a, beta); }, alpha);
    const double fd_b = central_diff([&](double b) { return nll_scalar(r, alpha, b); }, beta);

    CHECK(grad_err(g.d_residual.v[0], fd_r) < 1e-4);
    CHECK(grad_err(g.d_alpha.v[0], fd_a) < 1e-4);
    CHECK(grad_err(g.d_beta.v[0], fd_b) < 1e-4);
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("gradients on a full map match elementwise finite differences") {
  Rng rng(48);
  Image r = random_image(4, 4, 3, 0.05, 1.0, rng);
  for (double& x : r.v)
    if (rng.bernoulli(0.5)) x = -x;
  GndParams p;
  p.alpha = random_map(4, 4, 0.3, 2.0, rng);
  p.beta = random_map(4, 4, 0.5, 3.0, rng);
  const auto g = gnd_nll_gradients(r, p);

  for (int i = 0; i < 5; ++i) {
    const std::size_t j = rng.below(p.alpha.v.size());
    auto eval_alpha = [&](double a) {
      GndParams q = p;
      q.alpha.v[j] = a;
      return gnd_nll(r, q, Reduction::kSum).total;
    };
    CHECK(grad_err(g.d_alpha.v[j], central_diff(eval_alpha, p.alpha.v[j])) < 1e-4);

    auto eval_beta = [&](double b) {
      GndParams q = p;
      q.beta.v[j] = b;
      return gnd_nll(r, q, Reduction::kSum).total;
    };
    CHECK(grad_err(g.d_beta.v[j], central_diff(eval_beta, p.beta.v[j])) < 1e-4);

    const std::size_t k = rng.below(r.v.size());
    auto eval_res = [&](double x) {
      Image rr = r;
      rr.v[k] = x;
      return gnd_nll(rr, p, Reduction::kSum).total;
    };
    CHECK(grad_err(g.d_residual.v[k], central_diff(eval_res, r.v[k])) < 1e-4);
  }
}

TEST_CASE("domain and dimension errors") {
  CHECK_THROWS_AS(gnd_nll(single_pixel(1.0), single_params(0.0, 2.0), Reduction::kSum),
                  std::domain_error);
  CHECK_THROWS_AS(gnd_nll(single_pixel(1.0), single_params(-1.0, 2.0), Reduction::kSum),
                  std::domain_error);
  CHECK_THROWS_AS(gnd_nll(single_pixel(1.0), single_params(1.0, 0.05), Reduction::kSum),
                  std::domain_error);

  Image wrong(2, 2, 1, 0.5);
  CHECK_THROWS_AS(gnd_nll(wrong, single_params(1.0, 2.0), Reduction::kSum),
                  std::invalid_argument);

  Image inf_img = single_pixel(std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(gnd_nll(inf_img, single_params(1.0, 2.0), Reduction::kSum), std::domain_error);

  Map2 bad_sigma(1, 1, 0.0);
  CHECK_THROWS_AS(gaussian_nll(single_pixel(1.0), bad_sigma, Reduction::kSum), std::domain_error);

  // non-differentiable point reported, not smoothed
  CHECK_THROWS_AS(gnd_nll_gradients(single_pixel(0.0), single_params(1.0, 0.5)),
                  std::domain_error);
}

TEST_SUITE_END();
