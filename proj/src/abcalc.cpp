#include "abfrac/abcalc.hpp"

#include <cmath>
#include <string>

#include "abfrac/errors.hpp"
#include "abfrac/product_rule.hpp"

namespace abfrac::abcalc {

namespace {

void check_input(const SampledFunction& f) {
  f.validate();
  if (f.size() < 2) throw GridError("fractional operator: need at least 2 samples");
  if (f.t0 != 0.0) throw GridError("fractional operator: grid must start at t = 0");
}

SampledFunction same_grid(const SampledFunction& f, std::vector<double> values) {
  SampledFunction out;
  out.t0 = f.t0;
  out.dt = f.dt;
  out.values = std::move(values);
  return out;
}

SampledFunction memory_derivative(const SampledFunction& f, const ABConfig& cfg,
                                  const ProductRule& rule) {
  const double scale = cfg.b_of_alpha / (1.0 - cfg.alpha);
  std::vector<double> out = f.derivative_values ? rule.convolve_all(*f.derivative_values)
                                                : rule.convolve_increments_all(f.values);
  for (auto& v : out) v *= scale;
  return same_grid(f, std::move(out));
}

}  // namespace

double normalization(double alpha, Normalization kind) {
  switch (kind) {
    case Normalization::kOne:
      return 1.0;
    case Normalization::kAbFamily:
      if (alpha == 0.0) return 1.0;
      return 1.0 - alpha + alpha * specfun::rgamma(alpha);
  }
  return 1.0;
}

ABConfig ABConfig::make(double alpha, Normalization kind) {
  ABConfig cfg{alpha, normalization(alpha, kind)};
  cfg.validate();
  return cfg;
}

void ABConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("fractional order alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  if (!(b_of_alpha > 0.0) || !std::isfinite(b_of_alpha)) {
    throw DomainError("normalization B(alpha) must be positive");
  }
}

AbcOperator::AbcOperator(const ABConfig& cfg, double dt, std::size_t steps,
                         const specfun::EvalPolicy& policy)
    : cfg_(cfg) {
  cfg_.validate();
  if (!(dt > 0.0) || steps < 1) throw GridError("AbcOperator: need dt > 0 and steps >= 1");
  const double w = -cfg.alpha / (1.0 - cfg.alpha);
  rule_ = std::make_unique<ProductRule>(ml_kernel_moments(cfg.alpha, 1.0, w, dt, steps, policy));
}

AbcOperator::~AbcOperator() = default;
AbcOperator::AbcOperator(AbcOperator&&) noexcept = default;
AbcOperator& AbcOperator::operator=(AbcOperator&&) noexcept = default;

SampledFunction AbcOperator::apply(const SampledFunction& f) const {
  check_input(f);
  if (f.dt != rule_->step()) throw GridError("AbcOperator: sample step differs from the operator's");
  if (f.steps() > rule_->cells()) throw GridError("AbcOperator: samples exceed the operator's range");
  return memory_derivative(f, cfg_, *rule_);
}

SampledFunction abc_derivative(const SampledFunction& f, const ABConfig& cfg,
                               const specfun::EvalPolicy& policy) {
  cfg.validate();
  check_input(f);
  return AbcOperator(cfg, f.dt, f.steps(), policy).apply(f);
}

SampledFunction cf_derivative(const SampledFunction& f, const ABConfig& cfg) {
  cfg.validate();
  check_input(f);
  const double rate = cfg.alpha / (1.0 - cfg.alpha);
  const ProductRule rule(exponential_kernel_moments(rate, f.dt, f.steps()));
  return memory_derivative(f, cfg, rule);
}

SampledFunction ab_integral(const SampledFunction& f, const ABConfig& cfg) {
  cfg.validate();
  check_input(f);
  const double a = cfg.alpha;
  const double b = cfg.b_of_alpha;
  const ProductRule rule(power_kernel_moments(a, f.dt, f.steps()));
  std::vector<double> out = rule.convolve_all(f.values);
  const double local = (1.0 - a) / b;
  const double memory = a * specfun::rgamma(a) / b;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = local * f.values[i] + memory * out[i];
  return same_grid(f, std::move(out));
}

}  // namespace abfrac::abcalc
