#include <doctest.h>

#include <cmath>
#include <vector>

#include "abfrac/bvp.hpp"
#include "abfrac/errors.hpp"
#include "oracles.hpp"

using namespace abfrac;
using namespace abfrac::bvp;

namespace {

BVProblem problem(const char* src, double alpha = 0.5, int k_max = 8, std::size_t nx = 101, std::size_t nt = 200) {
  BVProblem p;
  p.forcing = Source::expression(src);
  p.cfg = abcalc::ABConfig{alpha, 1.0};
  p.k_max = k_max;
  p.nx = nx;
  p.nt = nt;
  return p;
}

// zero initial value, f(t) = t, B = 1: exact for the piecewise-linear rule
double linear_mode(double alpha, double lambda, double t) {
  const double den = 1.0 - lambda * (1.0 - alpha);
  const double mu = alpha * lambda / den;
  return (1.0 - alpha) / den * t +
         alpha / (den * den) * std::pow(t, alpha + 1.0) * oracle::ml(alpha, alpha + 2.0, mu * std::pow(t, alpha));
}

}  // namespace

TEST_CASE("sine coefficients") {
  // Simpson in x: fourth order
  for (int k = 1; k <= 6; ++k) {
    const double c = 4.0 * (1.0 - std::pow(-1.0, k)) / std::pow(k * M_PI, 3);
    double prev = INFINITY;
    for (std::size_t nx : {51u, 101u, 201u}) {
      const auto fk = sine_coefficients(problem("x*(1-x)*t", 0.5, 8, nx), k);
      const double err = std::abs(fk.values[200] - c);
      CHECK(fk.values[0] == 0.0);
      CHECK(err <= 1e-6);
      if (k % 2 == 1) CHECK(err < prev / 12.0);
      prev = err;
    }
  }
  const BVProblem q = problem("sin(3*pi*x)");
  for (int k = 1; k <= 8; ++k) {
    const double want = k == 3 ? 1.0 : 0.0;
    CHECK(std::abs(sine_coefficients(q, k).values[50] - want) <= 1e-12);
  }
}

TEST_CASE("single mode against the scalar formula") {
  for (double alpha : {0.3, 0.6, 0.9}) {
    const BVProblem p = problem("sin(pi*x)*t", alpha, 4, 51, 100);
    const ModalSolution m = solve_mode(p, 1);
    CHECK(m.k == 1);
    CHECK(m.lambda_k == doctest::Approx(M_PI * M_PI));
    for (std::size_t j : {10u, 50u, 100u}) {
      CHECK(m.u_k.values[j] == doctest::Approx(linear_mode(alpha, -M_PI * M_PI, m.u_k.time(j))).epsilon(1e-10));
    }
    const BvpSolution sol = solve(p);
    for (std::size_t i : {5u, 25u, 40u}) {
      const double x = p.x(i);
      CHECK(std::abs(sol.field.at(i, 100) - linear_mode(alpha, -M_PI * M_PI, 1.0) * std::sin(M_PI * x)) <= 1e-10);
    }
  }
}

TEST_CASE("modes decouple") {
  const BVProblem p = problem("sin(2*pi*x)*t", 0.5, 10);
  const BvpSolution sol = solve(p);
  REQUIRE(sol.modes.size() == 10);
  for (const auto& m : sol.modes) {
    double amp = 0.0;
    for (double v : m.u_k.values) amp = std::max(amp, std::abs(v));
    if (m.k == 2) {
      CHECK(amp > 1e-3);
    } else {
      CHECK(amp <= 1e-10);
    }
  }
}

TEST_CASE("modal amplitudes decay with k") {
  const BvpSolution sol = solve(problem("x*(1-x)*t", 0.5, 15));
  auto amp = [&](int k) { return std::abs(sol.modes[k - 1].u_k.values.back()); };
  for (int k = 1; k + 2 <= 15; k += 2) CHECK(amp(k + 2) < amp(k));
  for (int k = 2; k <= 15; k += 2) CHECK(amp(k) <= 1e-12);
}

TEST_CASE("boundary and initial traces are exact") {
  const BVProblem p = problem("x*(1-x)*t", 0.7, 8, 41, 100);
  const BvpSolution sol = solve(p);
  for (std::size_t j = 0; j < sol.field.rows(); ++j) {
    CHECK(sol.field.at(0, j) == 0.0);
    CHECK(std::abs(sol.field.at(40, j)) <= 1e-15);
  }
  for (std::size_t i = 0; i < 41; ++i) CHECK(sol.field.at(i, 0) == 0.0);
  CHECK(sol.warnings.empty());
}

TEST_CASE("residual report") {
  const BVProblem p = problem("x*(1-x)*t", 0.5, 32, 101, 400);
  const BvpSolution sol = solve(p);
  const ResidualSummary r = residual_report(sol.field, p);
  CHECK(r.boundary <= 1e-12);
  CHECK(r.initial <= 1e-10);
  CHECK(r.pde <= 2e-2);
  CHECK(r.forcing_scale == doctest::Approx(0.25 * 0.9 * 0.1 * 1.0).epsilon(0.3));

  const BVProblem zero = problem("0", 0.5, 4, 21, 100);
  const ResidualSummary z = residual_report(solve(zero).field, zero);
  CHECK(z.boundary == 0.0);
  CHECK(z.initial == 0.0);
  CHECK(z.pde == 0.0);

  Field2D ones{21, 100, 1.0, std::vector<double>(21 * 101, 1.0)};
  const ResidualSummary o = residual_report(ones, zero);
  CHECK(o.boundary == 1.0);
  CHECK(o.initial == 1.0);

  Field2D small{3, 100, 1.0, std::vector<double>(3 * 101, 0.0)};
  CHECK_THROWS_AS(residual_report(small, problem("0", 0.5, 1, 3, 100)), GridError);
  CHECK_THROWS_AS(residual_report(Field2D{21, 50, 1.0, std::vector<double>(21 * 51, 0.0)}, problem("0", 0.5, 4, 21, 50)),
                  GridError);
}

TEST_CASE("thread count does not change the result") {
  const BVProblem p = problem("exp(-t)*sin(2*pi*x) + x*(1-x)*t", 0.6, 12, 61, 150);
  const auto one = solve(p, 1).field.values;
  CHECK(solve(p, 3).field.values == one);
  CHECK(solve(p, 8).field.values == one);
}

TEST_CASE("grid and hypothesis handling") {
  BVProblem p = problem("x*(1-x)*t", 0.5, 4, 20, 100);
  CHECK(p.normalized().nx == 21);
  CHECK(solve(p).field.nx == 21);
  CHECK_THROWS_AS(solve(problem("t", 0.5, 10, 11, 100)), GridError);
  CHECK_THROWS_AS(solve(problem("t", 0.5, 0, 11, 100)), GridError);
  CHECK_THROWS_AS(solve(problem("t", 1.0, 2, 11, 100)), DomainError);

  const auto w = check_hypotheses(problem("x*t + 1", 0.5, 2));
  // f(x,0), f(0,t) and f(1,t) all nonzero
  CHECK(w.size() == 3);
  CHECK(check_hypotheses(problem("x*t", 0.5, 2)).size() == 1);
  CHECK(check_hypotheses(problem("sin(pi*x)*t")).empty());

  std::vector<ModalSolution> modes = solve(problem("sin(pi*x)*t", 0.5, 2, 11, 100)).modes;
  CHECK_THROWS_AS(assemble(modes, problem("sin(pi*x)*t", 0.5, 2, 11, 50)), DimensionMismatch);
  CHECK_THROWS_AS((Field2D{2, 2, 1.0, std::vector<double>(5, 0.0)}.validate()), DimensionMismatch);
}
