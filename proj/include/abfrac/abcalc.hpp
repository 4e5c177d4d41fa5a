#pragma once

#include <cstddef>
#include <memory>

#include "abfrac/sampled.hpp"
#include "abfrac/specfun.hpp"

namespace abfrac::abcalc {

/// Choice of the normalization function B(alpha); both satisfy B(0) = B(1) = 1.
enum class Normalization {
  kOne,       ///< B(alpha) = 1
  kAbFamily,  ///< B(alpha) = 1 - alpha + alpha / Gamma(alpha)
};

double normalization(double alpha, Normalization kind);

/// Fractional order in (0, 1) plus the value B(alpha).
struct ABConfig {
  double alpha = 0.5;
  double b_of_alpha = 1.0;

  static ABConfig make(double alpha, Normalization kind = Normalization::kOne);

  /// Throws DomainError unless 0 < alpha < 1 and b_of_alpha > 0.
  void validate() const;
};

/// Atangana-Baleanu derivative in the Caputo sense,
///   B/(1-alpha) int_0^t f'(s) E_alpha(-alpha/(1-alpha) (t-s)^alpha) ds.
///
/// With derivative samples present f' is taken piecewise linear; otherwise
/// f' is the derivative of the piecewise-linear interpolant of f, so each
/// cell contributes exactly its increment f_{j+1} - f_j. The kernel is
/// integrated exactly per cell. f.t0 must be 0; output at t = 0 is 0.
SampledFunction abc_derivative(const SampledFunction& f, const ABConfig& cfg,
                               const specfun::EvalPolicy& policy = {});

class ProductRule;

/// abc_derivative with the kernel moments built once for a fixed grid
/// (step dt, at most `steps` intervals), for repeated application.
class AbcOperator {
 public:
  AbcOperator(const ABConfig& cfg, double dt, std::size_t steps,
              const specfun::EvalPolicy& policy = {});
  ~AbcOperator();
  AbcOperator(AbcOperator&&) noexcept;
  AbcOperator& operator=(AbcOperator&&) noexcept;

  /// f must start at t = 0 with step dt and at most `steps` intervals.
  SampledFunction apply(const SampledFunction& f) const;

 private:
  ABConfig cfg_;
  std::unique_ptr<ProductRule> rule_;
};

/// Caputo-Fabrizio derivative (exponential kernel), same discretization.
SampledFunction cf_derivative(const SampledFunction& f, const ABConfig& cfg);

/// AB fractional integral
///   (1-alpha)/B f(t) + alpha/(B Gamma(alpha)) int_0^t f(s) (t-s)^(alpha-1) ds
/// with exact moments of (t-s)^(alpha-1) against piecewise-linear f.
SampledFunction ab_integral(const SampledFunction& f, const ABConfig& cfg);

}  // namespace abfrac::abcalc
