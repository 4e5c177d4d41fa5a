#include <doctest.h>

#include <cmath>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "abfrac/abcalc.hpp"
#include "abfrac/errors.hpp"
#include "abfrac/product_rule.hpp"
#include "abfrac/specfun.hpp"
#include "oracles.hpp"

using namespace abfrac;
using namespace abfrac::abcalc;

namespace {

SampledFunction grid(double (*fn)(double), double t_end, std::size_t n) {
  return SampledFunction::tabulate(fn, 0.0, t_end, n);
}

}  // namespace

TEST_CASE("power kernel moments are exact") {
  const double beta = 0.35;
  const double h = 0.125;
  const CellMoments m = power_kernel_moments(beta, h, 6);
  for (std::size_t c = 0; c < 6; ++c) {
    const double a = c * h;
    const double b = a + h;
    const double whole = oracle::integrate([&](double s) { return std::pow(s, beta - 1.0); }, a, b);
    const double left = oracle::integrate([&](double s) { return (b - s) * std::pow(s, beta - 1.0) / h; }, a, b);
    CHECK(m.whole[c] == doctest::Approx(whole).epsilon(1e-12));
    CHECK(m.left[c] == doctest::Approx(left).epsilon(1e-12));
  }
}

TEST_CASE("Mittag-Leffler kernel moments against quadrature") {
  for (double c : {-2.0, 0.0, 1.5}) {
    const double alpha = 0.6;
    const double beta = 0.6;
    const double h = 0.05;
    const CellMoments m = ml_kernel_moments(alpha, beta, c, h, 12);
    // antiderivatives of k(s) = s^(beta-1) E_{alpha,beta}(c s^alpha) and of its first moment:
    //   F(s) = s^beta E_{alpha,beta+1}(c s^alpha),  G(s) = s^(beta+1) E_{alpha,beta+2}(c s^alpha),
    //   int s k(s) ds = s F(s) - G(s)
    auto F = [&](double s) { return std::pow(s, beta) * oracle::ml(alpha, beta + 1.0, c * std::pow(s, alpha)); };
    auto G = [&](double s) { return std::pow(s, beta + 1.0) * oracle::ml(alpha, beta + 2.0, c * std::pow(s, alpha)); };
    for (std::size_t cell : {0u, 1u, 2u, 5u, 11u}) {
      const double a = cell * h;
      const double b = a + h;
      const double whole = F(b) - F(a);
      const double left = (G(b) - G(a) - h * F(a)) / h;
      CHECK(m.whole[cell] == doctest::Approx(whole).epsilon(1e-12));
      CHECK(m.left[cell] == doctest::Approx(left).epsilon(1e-12));
    }
  }
}

TEST_CASE("exponential kernel moments") {
  const CellMoments m = exponential_kernel_moments(3.0, 0.1, 4);
  for (std::size_t c = 0; c < 4; ++c) {
    const double a = c * 0.1;
    const double b = a + 0.1;
    CHECK(m.whole[c] == doctest::Approx((std::exp(-3 * a) - std::exp(-3 * b)) / 3.0).epsilon(1e-14));
  }
  const CellMoments flat = exponential_kernel_moments(0.0, 0.1, 2);
  CHECK(flat.whole[1] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(flat.left[1] == doctest::Approx(0.05).epsilon(1e-15));
}

TEST_CASE("product rule integrates piecewise-linear data exactly") {
  // g(s) = 1 + 2 s is linear, so the rule is exact against any kernel
  const double alpha = 0.4;
  const double h = 0.1;
  const ProductRule rule(power_kernel_moments(alpha, h, 10));
  std::vector<double> g(11);
  for (std::size_t j = 0; j <= 10; ++j) g[j] = 1.0 + 2.0 * j * h;
  for (std::size_t n : {1u, 4u, 10u}) {
    const double t = n * h;
    // int_0^t (1 + 2 s)(t - s)^(alpha - 1) ds
    const double want = std::pow(t, alpha) / alpha + 2.0 * std::pow(t, alpha + 1.0) * boost::math::beta(2.0, alpha);
    CHECK(rule.convolve(g, n) == doctest::Approx(want).epsilon(1e-13));
    // int_0^t g'(s) (t - s)^(alpha - 1) ds = 2 t^alpha / alpha
    CHECK(rule.convolve_increments(g, n) == doctest::Approx(2.0 * std::pow(t, alpha) / alpha).epsilon(1e-13));
  }
  const auto all = rule.convolve_all(g);
  CHECK(all.front() == 0.0);
  CHECK(all[7] == doctest::Approx(rule.convolve(g, 7)).epsilon(1e-15));
  CHECK_THROWS_AS(rule.convolve(std::vector<double>(20, 1.0), 15), GridError);
}

TEST_CASE("AB integral of t, t^2 and sin t") {
  for (double alpha : {0.3, 0.5, 0.8}) {
    const ABConfig cfg = ABConfig::make(alpha, Normalization::kAbFamily);
    const double b = cfg.b_of_alpha;
    const auto lin = ab_integral(grid([](double t) { return t; }, 1.0, 1000), cfg);
    // RL integral of t: t^(alpha+1) / Gamma(alpha + 2)
    const double want_lin = (1 - alpha) / b + alpha / b / boost::math::tgamma(alpha + 2.0);
    CHECK(lin.values.back() == doctest::Approx(want_lin).epsilon(1e-12));

    const auto quad = ab_integral(grid([](double t) { return t * t; }, 1.0, 2000), cfg);
    const double want_quad = (1 - alpha) / b + alpha / b * 2.0 / boost::math::tgamma(alpha + 3.0);
    CHECK(std::abs(quad.values.back() - want_quad) <= 1e-6);

    const auto sn = ab_integral(grid([](double t) { return std::sin(t); }, 1.0, 2000), cfg);
    const double rl = oracle::integrate([&](double u) { return std::sin(1.0 - u) * std::pow(u, alpha - 1.0); }, 0.0, 1.0) /
                      boost::math::tgamma(alpha);
    CHECK(std::abs(sn.values.back() - ((1 - alpha) / b * std::sin(1.0) + alpha / b * rl)) <= 1e-6);
  }
  const auto ex = ab_integral(grid([](double t) { return t; }, 1.0, 1000), ABConfig::make(0.5));
  CHECK(ex.values.back() == doctest::Approx(0.5 + 0.5 / boost::math::tgamma(2.5)).epsilon(1e-12));
}

TEST_CASE("ABC derivative of t and t^2") {
  for (double alpha : {0.2, 0.5, 0.9}) {
    const ABConfig cfg = ABConfig::make(alpha);
    const double w = -alpha / (1 - alpha);
    // f = t: B/(1-alpha) t E_{alpha,2}(w t^alpha), exact for linear data
    const auto d1 = abc_derivative(grid([](double t) { return t; }, 2.0, 200), cfg);
    for (std::size_t j : {50u, 100u, 200u}) {
      const double t = d1.time(j);
      const double want = t / (1 - alpha) * oracle::ml(alpha, 2.0, w * std::pow(t, alpha));
      CHECK(d1.values[j] == doctest::Approx(want).epsilon(1e-11));
    }
    // f = t^2: 2 B/(1-alpha) t^2 E_{alpha,3}(w t^alpha), second order in h
    double prev = INFINITY;
    for (std::size_t n : {100u, 200u, 400u}) {
      const auto d2 = abc_derivative(grid([](double t) { return t * t; }, 1.0, n), cfg);
      const double want = 2.0 / (1 - alpha) * oracle::ml(alpha, 3.0, w);
      const double err = std::abs(d2.values.back() - want);
      CHECK(err < prev / 3.0);
      prev = err;
    }
  }
}

TEST_CASE("ABC derivative with supplied derivative samples") {
  const ABConfig cfg = ABConfig::make(0.5);
  SampledFunction f = grid([](double t) { return t * t; }, 1.0, 400);
  std::vector<double> df(f.size());
  for (std::size_t j = 0; j < df.size(); ++j) df[j] = 2.0 * f.time(j);
  f.derivative_values = df;
  const auto d = abc_derivative(f, cfg);
  CHECK(d.values.back() == doctest::Approx(2.0 / 0.5 * oracle::ml(0.5, 3.0, -1.0)).epsilon(1e-11));
}

TEST_CASE("ABC derivative approaches f' as alpha -> 1") {
  const auto f = grid([](double t) { return t * t; }, 1.0, 2000);
  const auto d = abc_derivative(f, ABConfig::make(0.999));
  CHECK(d.values.back() == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("CF derivative and operator reuse") {
  const ABConfig cfg = ABConfig::make(0.5);
  const auto d = cf_derivative(grid([](double t) { return t; }, 1.0, 100), cfg);
  CHECK(d.values.back() == doctest::Approx(2.0 * (1.0 - std::exp(-1.0))).epsilon(1e-13));

  const AbcOperator op(cfg, 0.01, 100);
  const auto f = grid([](double t) { return std::sin(t); }, 0.5, 50);
  const auto a = op.apply(f);
  const auto b = abc_derivative(f, cfg);
  CHECK(a.values == b.values);
  CHECK_THROWS_AS(op.apply(grid([](double t) { return t; }, 2.0, 200)), GridError);
}

TEST_CASE("normalization and argument checks") {
  CHECK(normalization(0.5, Normalization::kOne) == 1.0);
  CHECK(normalization(0.5, Normalization::kAbFamily) ==
        doctest::Approx(0.5 + 0.5 / std::sqrt(M_PI)).epsilon(1e-15));
  CHECK(normalization(1.0, Normalization::kAbFamily) == doctest::Approx(1.0));
  CHECK_THROWS_AS(ABConfig::make(0.0), DomainError);
  CHECK_THROWS_AS(ABConfig::make(1.0), DomainError);
  CHECK_THROWS_AS((ABConfig{0.5, -1.0}.validate()), DomainError);

  SampledFunction one;
  one.values = {1.0};
  CHECK_THROWS_AS(ab_integral(one, ABConfig::make(0.5)), GridError);
  SampledFunction shifted = grid([](double t) { return t; }, 1.0, 10);
  shifted.t0 = 0.5;
  CHECK_THROWS_AS(abc_derivative(shifted, ABConfig::make(0.5)), GridError);
  SampledFunction bad = grid([](double t) { return t; }, 1.0, 10);
  bad.derivative_values = std::vector<double>(3, 0.0);
  CHECK_THROWS_AS(abc_derivative(bad, ABConfig::make(0.5)), GridError);
}
