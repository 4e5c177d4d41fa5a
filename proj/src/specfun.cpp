#include "abfrac/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "abfrac/errors.hpp"

namespace abfrac::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Lanczos partial-fraction sum for Gamma(x + 1).
double lanczos_sum(double x) {
  double a = kLanczosCoef[0];
  for (std::size_t i = 1; i < kLanczosCoef.size(); ++i) {
    a += kLanczosCoef[i] / (x + static_cast<double>(i));
  }
  return a;
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

constexpr double kStirlingFrom = 15.0;

// log Gamma(x) - ((x - 1/2) log x - x + log(2 pi)/2) for x >= kStirlingFrom;
// truncation error below 1e-16 there.
long double stirling_correction(long double x) {
  static constexpr long double kCoef[] = {
      1.0L / 12.0L, -1.0L / 360.0L, 1.0L / 1260.0L, -1.0L / 1680.0L, 1.0L / 1188.0L, -691.0L / 360360.0L};
  const long double x2 = 1.0L / (x * x);
  long double acc = 0.0L;
  for (int i = 5; i >= 0; --i) acc = acc * x2 + kCoef[i];
  return acc / x;
}

long double stirling_log_gamma(long double x) {
  return (x - 0.5L) * std::log(x) - x + 0.5L * std::log(2.0L * std::numbers::pi_v<long double>) +
         stirling_correction(x);
}

// (n-1)! for n = 1..171, rounded once from extended precision
const std::array<double, 172>& factorial_table() {
  static const std::array<double, 172> table = [] {
    std::array<double, 172> t{};
    long double f = 1.0L;
    t[0] = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t n = 1; n < t.size(); ++n) {
      t[n] = static_cast<double>(f);
      f *= static_cast<long double>(n);
    }
    return t;
  }();
  return table;
}

std::string describe(const MLArgs& a) {
  std::ostringstream os;
  os.precision(17);
  os << "(alpha=" << a.alpha << ", beta=" << a.beta << ", delta=" << a.delta
     << ", z=" << a.z << ")";
  return os.str();
}

// Compensated (Neumaier) accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct SeriesResult {
  double value = 0.0;
  double abs_sum = 0.0;
  int terms = 0;
  bool converged = false;
};

// Terms (delta)_n z^n / (n! Gamma(alpha n + beta)). The Pochhammer ratio
// (delta)_n / n! is carried by recurrence; Gamma quotients never appear.
class PrabhakarTerms {
 public:
  PrabhakarTerms(double alpha, double beta, double delta, double z)
      : alpha_(alpha), beta_(beta), delta_(delta), z_(z),
        log_abs_z_(z != 0.0 ? std::log(std::abs(z)) : -kInf) {}

  double current() const {
    const double arg = alpha_ * n_ + beta_;
    if (z_ == 0.0) return n_ == 0 ? rgamma(arg) : 0.0;
    const double log_pow = n_ * log_abs_z_;
    if (arg <= 160.0 && log_pow < 650.0 && log_poch_ < 650.0) {
      return poch_ * std::pow(z_, n_) * rgamma(arg);
    }
    const double sign = (z_ < 0.0 && (n_ % 2 == 1)) ? -1.0 : 1.0;
    return sign * std::exp(log_poch_ + log_pow - log_gamma(arg));
  }

  void advance() {
    const double ratio = (delta_ + n_) / (n_ + 1.0);
    poch_ *= ratio;
    log_poch_ += std::log(ratio);
    ++n_;
  }

  // Upper bound on |t_{j+1} / t_j| for every j >= n (current index).
  double ratio_bound() const {
    const double arg = alpha_ * n_ + beta_;
    const double gamma_ratio = std::exp(log_gamma(arg) - log_gamma(arg + alpha_));
    return std::abs(z_) * gamma_ratio * std::max(1.0, (delta_ + n_) / (n_ + 1.0));
  }

  int index() const { return n_; }

 private:
  double alpha_, beta_, delta_, z_, log_abs_z_;
  int n_ = 0;
  double poch_ = 1.0;
  double log_poch_ = 0.0;
};

SeriesResult sum_series(const MLArgs& a, const EvalPolicy& policy) {
  PrabhakarTerms terms(a.alpha, a.beta, a.delta, a.z);
  CompensatedSum acc;
  SeriesResult out;
  double t = terms.current();
  for (int n = 0; n < policy.max_terms; ++n) {
    acc.add(t);
    out.abs_sum += std::abs(t);
    terms.advance();
    const double next = terms.current();
    const double partial = acc.value();
    // the tail never needs to drop below the rounding level of the sum itself
    const double stop =
        0.1 * std::min(policy.abs_tol * (a.z >= 0.0 ? std::max(1.0, std::abs(partial)) : 1.0),
                       2.0 * kEps * out.abs_sum);
    if (std::abs(next) <= stop) {
      const double rho = terms.ratio_bound();
      if (rho < 1.0 && std::abs(next) / (1.0 - rho) <= stop) {
        out.value = partial;
        out.terms = n + 1;
        out.converged = std::isfinite(partial);
        return out;
      }
    }
    if (!std::isfinite(out.abs_sum)) break;
    t = next;
  }
  out.value = acc.value();
  out.terms = policy.max_terms;
  return out;
}

// Collapsed Hankel contour for x > 0, 0 < alpha < 1:
//   E^delta_{alpha,beta}(-x) = -1/pi int_0^inf e^{-r} Im F(r e^{i pi}) dr,
//   F(s) = s^{alpha delta - beta} / (s^alpha + x)^delta,
// valid while alpha delta - beta > -1.
double hankel_integral(double alpha, double beta, double delta, double x,
                       double tol, double* error) {
  thread_local boost::math::quadrature::tanh_sinh<double> finite_rule;
  thread_local boost::math::quadrature::exp_sinh<double> half_line_rule;

  const double expo = alpha * delta - beta;
  const double phase0 = expo * kPi;
  const double ca = std::cos(alpha * kPi);
  const double sa = std::sin(alpha * kPi);
  // For expo near -1 the substitution r = u^(1/q), q = expo + 1, absorbs
  // r^expo dr into a constant Jacobian; otherwise q = 1 (no change).
  const double q = expo < -0.5 ? expo + 1.0 : 1.0;
  auto integrand = [=](double u) -> double {
    if (!(u > 0.0) || !std::isfinite(u)) return 0.0;
    const double log_r = std::log(u) / q;
    const double r = std::exp(log_r);
    const double ra = std::exp(alpha * log_r);
    const double re = x + ra * ca;
    const double im = ra * sa;
    const double log_jac = q == 1.0 ? 0.0 : log_r * (1.0 - q) - std::log(q);
    const double log_mag =
        -r + expo * log_r + log_jac - 0.5 * delta * std::log(re * re + im * im);
    if (log_mag < -745.0) return 0.0;
    return -std::exp(log_mag) * std::sin(phase0 - delta * std::atan2(im, re)) / kPi;
  };

  // |s^alpha + x| is smallest where r^alpha = -x cos(alpha pi); split there so
  // both rules see the near-pole peak at an endpoint.
  double split = 0.0;
  if (ca < 0.0) split = std::pow(-x * ca, 1.0 / alpha);
  double err1 = 0.0;
  double err2 = 0.0;
  double value = 0.0;
  if (split > 0.0 && split < 50.0) {
    const double split_u = std::pow(split, q);
    value = finite_rule.integrate(integrand, 0.0, split_u, tol, &err1) +
            half_line_rule.integrate(integrand, split_u, kInf, tol, &err2);
  } else {
    value = half_line_rule.integrate(integrand, 0.0, kInf, tol, &err2);
  }
  if (error) *error = err1 + err2;
  return value;
}

MLEvaluation integral_branch(const MLArgs& a, const EvalPolicy& policy) {
  const double x = -a.z;
  constexpr double kQuadTol = 1e-13;
  if (a.delta == 1.0 && a.beta > 1.0) {
    // E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z keeps the contour
    // integrand's r^{a-b} singularity mild.
    MLArgs inner = a;
    inner.beta = a.beta - a.alpha;
    MLEvaluation e = integral_branch(inner, policy);
    e.value = (e.value - rgamma(inner.beta)) / a.z;
    e.error_estimate /= x;
    return e;
  }
  if (a.alpha * a.delta - a.beta <= -1.0) {
    throw NonConvergence("Mittag-Leffler " + describe(a) +
                         ": argument outside the supported range (series cancellation "
                         "too severe and contour integral divergent)");
  }
  MLEvaluation e;
  e.branch = Branch::kIntegral;
  e.value = hankel_integral(a.alpha, a.beta, a.delta, x, kQuadTol, &e.error_estimate);
  if (!std::isfinite(e.value) || e.error_estimate > std::max(policy.abs_tol, 1e-12 * std::abs(e.value))) {
    throw NonConvergence("Mittag-Leffler " + describe(a) + ": contour quadrature error " +
                         std::to_string(e.error_estimate) + " exceeds tolerance");
  }
  return e;
}

// alpha == 1, z < 0: Kummer's transformation turns
// E_{1,b}(z) = 1F1(1; b; z) / Gamma(b) into e^z 1F1(b-1; b; -z) / Gamma(b),
// a series of non-negative terms.
MLEvaluation kummer_branch(const MLArgs& a, const EvalPolicy& policy) {
  const double x = -a.z;
  const double b = a.beta;
  CompensatedSum acc;
  double term = 1.0;
  for (int k = 0; k < policy.max_terms; ++k) {
    acc.add(term);
    const double next = term * (b - 1.0 + k) / (b + k) * x / (k + 1.0);
    // ratio (b-1+k)/(b+k) < 1 and x/(k+1) decreases: geometric tail bound
    const double rho = x / (k + 2.0);
    if (rho < 1.0 && std::abs(next) / (1.0 - rho) <= 0.01 * kEps * std::abs(acc.value())) {
      MLEvaluation e;
      e.value = std::exp(a.z) * acc.value() * rgamma(b);
      e.terms = k + 1;
      e.error_estimate = 4.0 * kEps * std::abs(e.value);
      return e;
    }
    term = next;
  }
  throw NonConvergence("Mittag-Leffler " + describe(a) + ": Kummer series hit max_terms");
}

// 1 < alpha <= 2, delta == 1, z large negative:
//   E_{a,b}(z) ~ -sum_{k>=1} z^{-k} / Gamma(b - a k),
// plus oscillatory exponential terms of size |z|^{(1-b)/a} exp(|z|^{1/a} cos(pi/a)).
MLEvaluation asymptotic_branch(const MLArgs& a, const EvalPolicy& policy) {
  const double x = -a.z;
  const double expo_part = std::pow(x, (1.0 - a.beta) / a.alpha) / a.alpha *
                           std::exp(std::pow(x, 1.0 / a.alpha) * std::cos(kPi / a.alpha));
  CompensatedSum acc;
  double prev = kInf;
  double trunc = kInf;
  for (int k = 1; k <= policy.max_terms; ++k) {
    const double term = -std::pow(a.z, -k) * rgamma(a.beta - a.alpha * k);
    const double mag = std::abs(term);
    if (mag > prev && mag != 0.0) break;
    if (mag != 0.0) prev = mag;
    acc.add(term);
    trunc = mag;
    if (mag < 0.01 * policy.abs_tol && k > 2) break;
  }
  MLEvaluation e;
  e.branch = Branch::kAsymptotic;
  e.value = acc.value();
  e.error_estimate = (std::isfinite(trunc) ? trunc : 0.0) + expo_part;
  if (!(e.error_estimate <= policy.abs_tol)) {
    throw NonConvergence("Mittag-Leffler " + describe(a) +
                         ": outside the series and asymptotic regimes");
  }
  return e;
}

void check_args(const MLArgs& a) {
  if (!(a.alpha > 0.0) || a.alpha > 2.0) {
    throw DomainError("Mittag-Leffler: alpha must lie in (0, 2], got " + describe(a));
  }
  if (!(a.beta > 0.0)) throw DomainError("Mittag-Leffler: beta must be > 0, got " + describe(a));
  if (!(a.delta > 0.0)) throw DomainError("Mittag-Leffler: delta must be > 0, got " + describe(a));
  if (!std::isfinite(a.z)) throw DomainError("Mittag-Leffler: non-finite argument " + describe(a));
}

}  // namespace

void EvalPolicy::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("EvalPolicy: abs_tol must be > 0");
  if (max_terms < 50) throw DomainError("EvalPolicy: max_terms must be >= 50");
  if (!(series_radius > 0.0)) throw DomainError("EvalPolicy: series_radius must be > 0");
}

double gamma(double x) {
  if (std::isnan(x)) return x;
  if (is_nonpositive_integer(x)) return std::numeric_limits<double>::quiet_NaN();
  if (x < 0.5) {
    return kPi / (std::sin(kPi * x) * gamma(1.0 - x));
  }
  if (x > 171.7) return kInf;
  if (x <= 171.0 && std::floor(x) == x) return factorial_table()[static_cast<std::size_t>(x)];
  // the 9-term Lanczos error grows roughly linearly in x; Stirling takes over
  if (x >= kStirlingFrom) return static_cast<double>(std::exp(stirling_log_gamma(x)));
  const double y = x - 1.0;
  const double t = y + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * lanczos_sum(y) * std::pow(t, y + 0.5) * std::exp(-t);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be > 0");
  if (x < 0.5) {
    return std::log(kPi / std::sin(kPi * x)) - log_gamma(1.0 - x);
  }
  if (x >= kStirlingFrom) return static_cast<double>(stirling_log_gamma(x));
  const double y = x - 1.0;
  const double t = y + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (y + 0.5) * std::log(t) - t + std::log(lanczos_sum(y));
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x > 171.7) return std::exp(-log_gamma(x));
  return 1.0 / gamma(x);
}

MLEvaluation evaluate(const MLArgs& a, const EvalPolicy& policy) {
  check_args(a);
  policy.validate();

  if (a.z >= 0.0) {
    const SeriesResult s = sum_series(a, policy);
    if (!s.converged) {
      throw NonConvergence("Mittag-Leffler " + describe(a) +
                           ": series did not reach tolerance within max_terms (or overflowed)");
    }
    return MLEvaluation{s.value, Branch::kSeries, s.terms, 0.1 * policy.abs_tol};
  }

  const double x = -a.z;
  // log of the largest series term is about x^(1/alpha); beyond ~60 the
  // cancellation is hopeless, so skip the attempt.
  const bool try_series = x <= policy.series_radius && std::pow(x, 1.0 / a.alpha) < 60.0;
  if (try_series) {
    const SeriesResult s = sum_series(a, policy);
    const double rounding = 8.0 * kEps * s.abs_sum;
    if (s.converged && rounding <= 0.5 * policy.abs_tol) {
      return MLEvaluation{s.value, Branch::kSeries, s.terms, rounding + 0.1 * policy.abs_tol};
    }
  }
  if (a.alpha < 1.0) return integral_branch(a, policy);
  if (a.alpha == 1.0 && a.delta == 1.0) return kummer_branch(a, policy);
  if (a.delta == 1.0) return asymptotic_branch(a, policy);
  throw NonConvergence("Mittag-Leffler " + describe(a) +
                       ": no accurate method for this parameter/argument combination");
}

double ml1(double alpha, double z, const EvalPolicy& policy) {
  return ml2(alpha, 1.0, z, policy);
}

double ml2(double alpha, double beta, double z, const EvalPolicy& policy) {
  return evaluate(MLArgs{alpha, beta, 1.0, z}, policy).value;
}

double ml3(double alpha, double beta, double delta, double z, const EvalPolicy& policy) {
  return evaluate(MLArgs{alpha, beta, delta, z}, policy).value;
}

double ml_kernel_derivative(double alpha, double w, double t, const EvalPolicy& policy) {
  if (!(t > 0.0)) {
    throw DomainError("ml_kernel_derivative: t must be > 0 (t^(alpha-1) is singular at 0)");
  }
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw DomainError("ml_kernel_derivative: alpha must lie in (0, 1]");
  }
  const double ta = std::pow(t, alpha);
  return w * (ta / t) * ml2(alpha, alpha, w * ta, policy);
}

}  // namespace abfrac::specfun
