#pragma once

// Euler Gamma and the one-, two- and three-parameter (Prabhakar)
// Mittag-Leffler functions on the real line.

namespace abfrac::specfun {

struct EvalPolicy {
  double abs_tol = 1e-12;
  int max_terms = 10000;
  /// Negative arguments beyond this magnitude never use the power series.
  double series_radius = 15.0;

  /// Throws DomainError unless abs_tol > 0, max_terms >= 50, series_radius > 0.
  void validate() const;
};

/// Parameter triple plus argument for a Mittag-Leffler evaluation.
/// delta == 1 is the two-parameter function, delta == beta == 1 the
/// one-parameter one.
struct MLArgs {
  double alpha = 1.0;
  double beta = 1.0;
  double delta = 1.0;
  double z = 0.0;
};

/// How a value was obtained. Exposed so tests can pin each regime.
enum class Branch { kSeries, kIntegral, kAsymptotic };

struct MLEvaluation {
  double value = 0.0;
  Branch branch = Branch::kSeries;
  int terms = 0;
  double error_estimate = 0.0;
};

/// Lanczos (g = 7, 9 coefficients) with reflection below 1/2.
double gamma(double x);
/// log|Gamma(x)| for x > 0.
double log_gamma(double x);
/// 1/Gamma(x), exactly zero at the poles x = 0, -1, -2, ...
double rgamma(double x);

/// Three-parameter evaluation with branch diagnostics.
///
/// For z >= 0 the power series is summed with Neumaier compensation and a
/// rigorous geometric tail bound; the tolerance is absolute up to |E| = 1 and
/// relative beyond. For z < 0 the series is used while its cancellation keeps
/// the rounding error below abs_tol; otherwise 0 < alpha < 1 switches to the
/// Hankel-contour integral collapsed onto the negative real axis and
/// 1 <= alpha <= 2 (delta = 1 only) to the algebraic asymptotic expansion.
MLEvaluation evaluate(const MLArgs& args, const EvalPolicy& policy = {});

/// E_alpha(z) = sum z^k / Gamma(alpha k + 1).
double ml1(double alpha, double z, const EvalPolicy& policy = {});
/// E_{alpha,beta}(z) = sum z^k / Gamma(alpha k + beta).
double ml2(double alpha, double beta, double z, const EvalPolicy& policy = {});
/// E^delta_{alpha,beta}(z) = sum (delta)_n z^n / (Gamma(alpha n + beta) n!).
double ml3(double alpha, double beta, double delta, double z,
           const EvalPolicy& policy = {});

/// d/dt E_alpha(w t^alpha) = w t^(alpha-1) E_{alpha,alpha}(w t^alpha), t > 0.
double ml_kernel_derivative(double alpha, double w, double t,
                            const EvalPolicy& policy = {});

}  // namespace abfrac::specfun
