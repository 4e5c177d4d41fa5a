#include "abfrac/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "abfrac/errors.hpp"
#include "abfrac/product_rule.hpp"

namespace abfrac::ivp {

namespace {

constexpr double kMaxGrowthArgument = 30.0;

double grid_time(const IVProblem& p, std::size_t n_steps, std::size_t j) {
  return j == n_steps ? p.horizon
                      : p.horizon * static_cast<double>(j) / static_cast<double>(n_steps);
}

void check_steps(std::size_t n_steps) {
  if (n_steps < 2) throw GridError("need at least 2 time steps, got " + std::to_string(n_steps));
}

void check_growth(const IVProblem& p, const ResolventContext& ctx) {
  if (ctx.mu <= 0.0) return;
  const double arg = ctx.mu * std::pow(p.horizon, ctx.alpha);
  if (arg > kMaxGrowthArgument || std::pow(arg, 1.0 / ctx.alpha) > 600.0) {
    throw RangeError("mu T^alpha = " + std::to_string(arg) +
                     " puts the Mittag-Leffler growth beyond double range");
  }
}

std::vector<double> sample_forcing(const IVProblem& p, std::size_t n_steps) {
  std::vector<double> f(n_steps + 1);
  for (std::size_t j = 0; j <= n_steps; ++j) {
    f[j] = p.forcing(grid_time(p, n_steps, j));
    if (!std::isfinite(f[j])) throw DomainError("forcing is not finite on the grid");
  }
  return f;
}

IvpSolution make_solution(const IVProblem& p, std::size_t n_steps, std::vector<double> u) {
  IvpSolution sol;
  sol.u.t0 = 0.0;
  sol.u.dt = p.horizon / static_cast<double>(n_steps);
  sol.u.values = std::move(u);
  sol.compatibility_residual = p.compatibility_residual();
  sol.incompatible = sol.compatibility_residual > kCompatibilityTol;
  sol.initial_jump = std::abs(sol.u.values.front() - p.u0);
  return sol;
}

}  // namespace

Forcing::Forcing() : impl_(expr::Expr()) {}

Forcing Forcing::expression(expr::Expr e) {
  Forcing f;
  f.impl_ = std::move(e);
  return f;
}

Forcing Forcing::expression(std::string_view src) { return expression(expr::parse(src)); }

Forcing Forcing::tabulated(SampledFunction samples) {
  samples.validate();
  Forcing f;
  f.impl_ = std::move(samples);
  return f;
}

Forcing Forcing::callable(std::function<double(double)> fn, std::string label) {
  if (!fn) throw DomainError("empty forcing callable");
  Forcing f;
  f.impl_ = Callable{std::move(fn), std::move(label)};
  return f;
}

Forcing::Kind Forcing::kind() const {
  switch (impl_.index()) {
    case 0: return Kind::kExpression;
    case 1: return Kind::kTabulated;
    default: return Kind::kCallable;
  }
}

double Forcing::operator()(double t) const {
  if (const auto* e = std::get_if<expr::Expr>(&impl_)) return e->eval(t);
  if (const auto* s = std::get_if<SampledFunction>(&impl_)) return s->interpolate(t);
  return std::get<Callable>(impl_).fn(t);
}

std::string Forcing::describe() const {
  if (const auto* e = std::get_if<expr::Expr>(&impl_)) return e->to_string();
  if (const auto* s = std::get_if<SampledFunction>(&impl_)) {
    return "tabulated(" + std::to_string(s->size()) + " samples)";
  }
  return std::get<Callable>(impl_).label;
}

void Forcing::check_covers(double horizon) const {
  const auto* s = std::get_if<SampledFunction>(&impl_);
  if (!s) return;
  const double slack = 1e-12 * std::max(1.0, horizon);
  if (s->t0 > slack || s->end_time() < horizon - slack) {
    throw GridError("tabulated forcing does not cover [0, T]");
  }
}

double IVProblem::denominator() const {
  return cfg.b_of_alpha - lambda * (1.0 - cfg.alpha);
}

double IVProblem::singular_tol() const { return 1e-9 * (1.0 + std::abs(cfg.b_of_alpha)); }

double IVProblem::compatibility_residual() const { return std::abs(forcing(0.0) + lambda * u0); }

void IVProblem::validate() const {
  cfg.validate();
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon T must be positive");
  if (!std::isfinite(lambda) || !std::isfinite(u0)) throw DomainError("lambda and u0 must be finite");
  forcing.check_covers(horizon);
  if (std::abs(denominator()) <= singular_tol()) {
    throw SingularParameter("lambda = " + std::to_string(lambda) +
                            " is at the singular value B/(1-alpha)");
  }
}

ResolventContext ResolventContext::from(const abcalc::ABConfig& cfg, double lambda) {
  const double a = cfg.alpha;
  const double b = cfg.b_of_alpha;
  const double den = b - lambda * (1.0 - a);
  if (std::abs(den) <= 1e-9 * (1.0 + std::abs(b))) {
    throw SingularParameter("lambda is at the singular value B/(1-alpha)");
  }
  ResolventContext ctx;
  ctx.alpha = a;
  ctx.c1 = b / den;
  ctx.c2 = a / (1.0 - a);
  ctx.w = -ctx.c2;
  ctx.mu = a * lambda / den;
  return ctx;
}

ResolventContext ResolventContext::from(const IVProblem& p) {
  p.validate();
  return from(p.cfg, p.lambda);
}

double rhs_hat(const IVProblem& p, double t, const specfun::EvalPolicy& policy) {
  const ResolventContext ctx = ResolventContext::from(p);
  if (t < 0.0 || t > p.horizon) throw DomainError("rhs_hat: t outside [0, T]");
  const double d1 = (1.0 - p.cfg.alpha) / p.denominator();
  const double memory = ctx.c1 * p.u0 * specfun::ml1(p.cfg.alpha, ctx.w * std::pow(t, p.cfg.alpha), policy);
  return memory + d1 * p.forcing(t);
}

IvpSolution solve_closed_form(const IVProblem& p, std::size_t n_steps,
                              const specfun::EvalPolicy& policy) {
  check_steps(n_steps);
  const ResolventContext ctx = ResolventContext::from(p);
  check_growth(p, ctx);

  const double a = p.cfg.alpha;
  const double den = p.denominator();
  const double d1 = (1.0 - a) / den;
  const double memory_scale = a * p.cfg.b_of_alpha / (den * den);
  const double h = p.horizon / static_cast<double>(n_steps);

  const std::vector<double> f = sample_forcing(p, n_steps);
  const abcalc::ProductRule rule(abcalc::ml_kernel_moments(a, a, ctx.mu, h, n_steps, policy));
  const std::vector<double> conv = rule.convolve_all(f);

  std::vector<double> u(n_steps + 1);
  for (std::size_t j = 0; j <= n_steps; ++j) {
    const double t = grid_time(p, n_steps, j);
    const double homogeneous =
        p.u0 == 0.0 ? 0.0 : ctx.c1 * p.u0 * specfun::ml1(a, ctx.mu * std::pow(t, a), policy);
    u[j] = homogeneous + d1 * f[j] + memory_scale * conv[j];
  }
  return make_solution(p, n_steps, std::move(u));
}

IvpSolution picard_solve(const IVProblem& p, std::size_t n_steps, int max_iters,
                         double iter_tol, const specfun::EvalPolicy& policy) {
  check_steps(n_steps);
  if (max_iters < 1) throw DomainError("max_iters must be at least 1");
  if (!(iter_tol > 0.0)) throw DomainError("iter_tol must be positive");
  const ResolventContext ctx = ResolventContext::from(p);

  const double a = p.cfg.alpha;
  const double d1 = (1.0 - a) / p.denominator();
  const double h = p.horizon / static_cast<double>(n_steps);
  const double gain = ctx.c1 * ctx.c2;

  const std::vector<double> f = sample_forcing(p, n_steps);
  std::vector<double> f_hat(n_steps + 1);
  for (std::size_t j = 0; j <= n_steps; ++j) {
    const double t = grid_time(p, n_steps, j);
    const double memory =
        p.u0 == 0.0 ? 0.0 : ctx.c1 * p.u0 * specfun::ml1(a, ctx.w * std::pow(t, a), policy);
    f_hat[j] = memory + d1 * f[j];
  }

  // K(tau) = -c1 d/dtau E_alpha(w tau^alpha) = c1 c2 tau^(alpha-1) E_{alpha,alpha}(w tau^alpha)
  const abcalc::ProductRule rule(abcalc::ml_kernel_moments(a, a, ctx.w, h, n_steps, policy));

  std::vector<double> u = f_hat;
  double change = 0.0;
  for (int iter = 1; iter <= max_iters; ++iter) {
    const std::vector<double> conv = rule.convolve_all(u);
    change = 0.0;
    for (std::size_t j = 0; j <= n_steps; ++j) {
      const double next = f_hat[j] + gain * conv[j];
      change = std::max(change, std::abs(next - u[j]));
      u[j] = next;
    }
    if (!std::isfinite(change)) break;
    if (change <= iter_tol) {
      IvpSolution sol = make_solution(p, n_steps, std::move(u));
      sol.iterations = iter;
      sol.last_change = change;
      return sol;
    }
  }
  throw NoConvergence("Picard iteration: sup-norm change " + std::to_string(change) +
                      " after " + std::to_string(max_iters) + " iterations");
}

double resolvent_kernel(int i, double gap, const ResolventContext& ctx,
                        const specfun::EvalPolicy& policy) {
  if (i < 1) throw DomainError("resolvent_kernel: index must be >= 1");
  if (!(gap > 0.0)) throw DomainError("resolvent_kernel: gap must be positive");
  const double a = ctx.alpha;
  const double n = static_cast<double>(i);
  const double scale = std::pow(ctx.c1 * ctx.c2, n) * std::pow(gap, n * a - 1.0);
  return scale * specfun::ml3(a, n * a, n, ctx.w * std::pow(gap, a), policy);
}

double resolvent_sum_closed(double gap, const ResolventContext& ctx,
                            const specfun::EvalPolicy& policy) {
  if (!(gap > 0.0)) throw DomainError("resolvent_sum_closed: gap must be positive");
  const double a = ctx.alpha;
  return ctx.c1 * ctx.c2 * std::pow(gap, a - 1.0) *
         specfun::ml2(a, a, ctx.mu * std::pow(gap, a), policy);
}

double resolvent_sum_partial(int n, double gap, const ResolventContext& ctx,
                             const specfun::EvalPolicy& policy) {
  if (n < 1) throw DomainError("resolvent_sum_partial: n must be >= 1");
  double sum = 0.0;
  for (int i = 1; i <= n; ++i) sum += resolvent_kernel(i, gap, ctx, policy);
  return sum;
}

LaplaceProbe laplace_image(const IVProblem& p, double s) {
  p.validate();
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("Laplace variable s must be positive");
  if (s * p.horizon < 20.0) {
    throw TailError("s T = " + std::to_string(s * p.horizon) + " < 20: truncated transform unreliable");
  }
  const double a = p.cfg.alpha;
  const double b = p.cfg.b_of_alpha;
  const double sa = std::pow(s, a);
  const double pole = sa * p.denominator() - p.lambda * a;
  if (std::abs(pole) <= p.singular_tol()) {
    throw PoleError("s = " + std::to_string(s) + " sits on the transform pole");
  }

  using boost::math::quadrature::gauss_kronrod;
  const auto integrand = [&](double t) { return p.forcing(t) * std::exp(-s * t); };
  const double f_hat = gauss_kronrod<double, 31>::integrate(integrand, 0.0, p.horizon, 20, 1e-14);

  LaplaceProbe probe;
  probe.s = s;
  probe.F = f_hat;
  probe.U = (b * std::pow(s, a - 1.0) * p.u0 + ((1.0 - a) * sa + a) * f_hat) / pole;
  return probe;
}

double numeric_laplace(const SampledFunction& u, double s) {
  u.validate();
  if (u.size() < 2) throw GridError("numeric_laplace: need at least 2 samples");
  if (!(s >= 0.0)) throw DomainError("numeric_laplace: s must be non-negative");
  const abcalc::CellMoments base = abcalc::exponential_kernel_moments(s, u.dt, 1);
  double sum = 0.0;
  for (std::size_t j = 0; j < u.steps(); ++j) {
    const double decay = std::exp(-s * u.time(j));
    const double left = base.left[0];
    const double right = base.whole[0] - left;
    sum += decay * (left * u.values[j] + right * u.values[j + 1]);
  }
  return sum;
}

double kernel_convolution(int i, int j, double alpha, double w, double gap,
                          const specfun::EvalPolicy& policy) {
  if (i < 1 || j < 1) throw DomainError("kernel_convolution: indices must be >= 1");
  if (!(gap > 0.0)) throw DomainError("kernel_convolution: gap must be positive");
  const auto kernel = [&](int n, double tau) {
    const double beta = n * alpha;
    return std::pow(tau, beta - 1.0) * specfun::ml3(alpha, beta, n, w * std::pow(tau, alpha), policy);
  };
  // xc is the signed distance to the nearest endpoint: a - s on the left half,
  // gap - s on the right half
  const auto integrand = [&](double s, double xc) {
    const double left = xc < 0.0 ? -xc : s;
    const double right = xc > 0.0 ? xc : gap - s;
    if (left <= 0.0 || right <= 0.0) return 0.0;
    return kernel(i, right) * kernel(j, left);
  };
  boost::math::quadrature::tanh_sinh<double> rule;
  return rule.integrate(integrand, 0.0, gap, 1e-12);
}

}  // namespace abfrac::ivp
