#include "abfrac/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <utility>

#include "abfrac/abcalc.hpp"
#include "abfrac/bvp.hpp"
#include "abfrac/errors.hpp"
#include "abfrac/ivp.hpp"

namespace abfrac::verify {

namespace {

Check make_check(std::string name, double max_error, double tolerance) {
  return Check{std::move(name), max_error, tolerance, max_error <= tolerance};
}

SuiteReport finish(std::string name, std::vector<Check> checks) {
  SuiteReport r;
  r.name = std::move(name);
  r.max_error = checks.front().max_error;
  r.tolerance = checks.front().tolerance;
  r.pass = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  r.checks = std::move(checks);
  return r;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

SuiteReport lemma(const specfun::EvalPolicy& policy) {
  double worst = 0.0;
  for (double alpha : {0.4, 0.6}) {
    for (double lambda : {-2.0, 0.5}) {
      const auto ctx = ivp::ResolventContext::from(abcalc::ABConfig::make(alpha), lambda);
      for (double gap : {0.05, 0.1, 0.3, 0.7, 1.0}) {
        const double err = std::abs(ivp::resolvent_sum_partial(12, gap, ctx, policy) -
                                    ivp::resolvent_sum_closed(gap, ctx, policy));
        worst = std::max(worst, err);
      }
    }
  }
  return finish("lemma", {make_check("partial sum of 12 kernels vs closed resolvent", worst, 1e-8)});
}

SuiteReport remark(const specfun::EvalPolicy& policy) {
  const std::vector<std::pair<const char*, std::function<double(double)>>> forcings = {
      {"t", [](double t) { return t; }},
      {"sin(t)", [](double t) { return std::sin(t); }},
      {"t^2", [](double t) { return t * t; }},
  };
  constexpr std::size_t n = 1000;
  double worst = 0.0;
  for (double alpha : {0.3, 0.5, 0.8}) {
    for (const auto& [label, fn] : forcings) {
      ivp::IVProblem p;
      p.cfg = abcalc::ABConfig::make(alpha);
      p.forcing = ivp::Forcing::callable(fn, label);
      const auto u = ivp::solve_closed_form(p, n, policy);
      const auto ref = abcalc::ab_integral(SampledFunction::tabulate(fn, 0.0, 1.0, n), p.cfg);
      worst = std::max(worst, sup_diff(u.u.values, ref.values));
    }
  }
  return finish("remark", {make_check("lambda = 0, u0 = 0 solution vs AB integral", worst, 1e-10)});
}

SuiteReport dual(const specfun::EvalPolicy& policy) {
  double worst = 0.0;
  for (double alpha : {0.3, 0.5, 0.8}) {
    for (double lambda : {-2.0, -0.5}) {
      ivp::IVProblem p;
      p.cfg = abcalc::ABConfig::make(alpha);
      p.lambda = lambda;
      p.u0 = 1.0;
      p.forcing = ivp::Forcing::callable([lambda](double t) { return -lambda * std::exp(-t); });
      const auto closed = ivp::solve_closed_form(p, 1000, policy);
      const auto picard = ivp::picard_solve(p, 1000, 50, 1e-8, policy);
      worst = std::max(worst, sup_diff(closed.u.values, picard.u.values));
    }
  }
  return finish("dual", {make_check("closed form vs Picard iteration, sup-norm", worst, 1e-4)});
}

SuiteReport semigroup(const specfun::EvalPolicy& policy) {
  constexpr double alpha = 0.5;
  constexpr double w = -1.0;
  double worst = 0.0;
  for (int i : {1, 2}) {
    for (int j : {1, 2}) {
      for (double gap : {0.25, 0.5, 1.0}) {
        const double n = i + j;
        const double exact = std::pow(gap, n * alpha - 1.0) *
                             specfun::ml3(alpha, n * alpha, n, w * std::pow(gap, alpha), policy);
        const double quad = ivp::kernel_convolution(i, j, alpha, w, gap, policy);
        worst = std::max(worst, std::abs(quad - exact) / std::abs(exact));
      }
    }
  }
  return finish("semigroup", {make_check("kernel convolution vs Prabhakar form, relative", worst, 1e-4)});
}

SuiteReport pde(const specfun::EvalPolicy& policy) {
  bvp::BVProblem p;
  p.forcing = bvp::Source::callable(
      [](double x, double t) { return std::sin(3.141592653589793 * x) * t; }, "sin(pi*x)*t");
  p.cfg = abcalc::ABConfig::make(0.5);
  p.k_max = 8;
  p.nx = 101;
  p.nt = 4000;
  const auto sol = bvp::solve(p, 1, policy);
  const auto r = bvp::residual_report(sol.field, p, policy);
  double leak = 0.0;
  for (const auto& m : sol.modes) {
    if (m.k < 2) continue;
    for (double v : m.u_k.values) leak = std::max(leak, std::abs(v));
  }
  return finish("pde", {
                           make_check("interior residual / max|f|", r.pde, 2e-2),
                           make_check("boundary trace", r.boundary, 1e-12),
                           make_check("initial trace", r.initial, 1e-10),
                           make_check("modes k >= 2, sup-norm", leak, 1e-10),
                       });
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"lemma", "remark", "dual", "semigroup", "pde"};
  return names;
}

SuiteReport run_suite(std::string_view name, const specfun::EvalPolicy& policy) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport r;
  if (name == "lemma") {
    r = lemma(policy);
  } else if (name == "remark") {
    r = remark(policy);
  } else if (name == "dual") {
    r = dual(policy);
  } else if (name == "semigroup") {
    r = semigroup(policy);
  } else if (name == "pde") {
    r = pde(policy);
  } else {
    throw DomainError("unknown verification suite '" + std::string(name) + "'");
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<SuiteReport> run(std::string_view name, const specfun::EvalPolicy& policy) {
  std::vector<SuiteReport> out;
  if (name == "all") {
    for (const auto& n : suite_names()) out.push_back(run_suite(n, policy));
  } else {
    out.push_back(run_suite(name, policy));
  }
  return out;
}

}  // namespace abfrac::verify
