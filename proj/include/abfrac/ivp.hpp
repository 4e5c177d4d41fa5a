#pragma once

// Linear fractional initial value problem with the ABC derivative:
//
//   ABC D^alpha u(t) = lambda u(t) + f(t),  u(0) = u0,  0 < t <= T.
//
// Solved either by the explicit resolvent formula or by Picard iteration on
// the equivalent Volterra equation of the second kind.

#include <cstddef>
#include <functional>
#include <string>
#include <variant>

#include "abfrac/abcalc.hpp"
#include "abfrac/expr.hpp"
#include "abfrac/sampled.hpp"
#include "abfrac/specfun.hpp"

namespace abfrac::ivp {

/// Evaluable right-hand side f(t).
class Forcing {
 public:
  enum class Kind { kExpression, kTabulated, kCallable };

  Forcing();  // f = 0
  static Forcing expression(expr::Expr e);
  static Forcing expression(std::string_view src);
  static Forcing tabulated(SampledFunction samples);
  static Forcing callable(std::function<double(double)> fn, std::string label = "callable");

  Kind kind() const;
  double operator()(double t) const;
  std::string describe() const;

  /// Throws GridError if tabulated samples do not cover [0, horizon].
  void check_covers(double horizon) const;

 private:
  struct Callable {
    std::function<double(double)> fn;
    std::string label;
  };
  std::variant<expr::Expr, SampledFunction, Callable> impl_;
};

struct IVProblem {
  abcalc::ABConfig cfg;
  double lambda = 0.0;
  double u0 = 0.0;
  Forcing forcing;
  double horizon = 1.0;

  /// B - lambda (1 - alpha).
  double denominator() const;
  /// 1e-9 (1 + |B|).
  double singular_tol() const;
  /// |f(0) + lambda u0|.
  double compatibility_residual() const;

  /// DomainError for bad alpha/B/T/non-finite data, SingularParameter when
  /// |B - lambda (1 - alpha)| <= singular_tol.
  void validate() const;
};

/// Composite constants of the resolvent formula.
struct ResolventContext {
  double alpha = 0.5;
  double c1 = 1.0;  ///< B / (B - lambda (1 - alpha))
  double c2 = 1.0;  ///< alpha / (1 - alpha)
  double w = -1.0;  ///< -alpha / (1 - alpha)
  double mu = 0.0;  ///< alpha lambda / (B - lambda (1 - alpha))

  static ResolventContext from(const IVProblem& p);
  static ResolventContext from(const abcalc::ABConfig& cfg, double lambda);
};

struct LaplaceProbe {
  double s = 0.0;
  double U = 0.0;
  double F = 0.0;
};

struct IvpSolution {
  SampledFunction u;
  double compatibility_residual = 0.0;
  /// Set when |f(0) + lambda u0| > 1e-12: the formula then misses u0 by initial_jump.
  bool incompatible = false;
  double initial_jump = 0.0;
  int iterations = 0;
  double last_change = 0.0;
};

inline constexpr double kCompatibilityTol = 1e-12;

/// Explicit solution
///   u = c1 u0 E_alpha(mu t^alpha) + (1-alpha)/D f
///       + alpha B / D^2 int_0^t f(s) (t-s)^(alpha-1) E_{alpha,alpha}(mu (t-s)^alpha) ds,
/// D = B - lambda (1 - alpha), on n_steps + 1 equispaced points of [0, T].
/// RangeError when mu T^alpha > 30.
IvpSolution solve_closed_form(const IVProblem& p, std::size_t n_steps,
                              const specfun::EvalPolicy& policy = {});

/// Successive approximation u_{m+1} = f_hat + int_0^t K(t-s) u_m(s) ds with
/// K(tau) = c1 c2 tau^(alpha-1) E_{alpha,alpha}(w tau^alpha), starting from
/// f_hat. Stops when the sup-norm change is <= iter_tol; NoConvergence after
/// max_iters otherwise.
IvpSolution picard_solve(const IVProblem& p, std::size_t n_steps, int max_iters = 50,
                         double iter_tol = 1e-8, const specfun::EvalPolicy& policy = {});

/// f_hat(t) = c1 u0 E_alpha(w t^alpha) + (1-alpha)/D f(t).
double rhs_hat(const IVProblem& p, double t, const specfun::EvalPolicy& policy = {});

/// K_i(gap) = (c1 c2)^i gap^(i alpha - 1) E^i_{alpha, i alpha}(w gap^alpha).
double resolvent_kernel(int i, double gap, const ResolventContext& ctx,
                        const specfun::EvalPolicy& policy = {});
/// c1 c2 gap^(alpha-1) E_{alpha,alpha}(mu gap^alpha).
double resolvent_sum_closed(double gap, const ResolventContext& ctx,
                            const specfun::EvalPolicy& policy = {});
/// sum_{i=1}^{n} K_i(gap).
double resolvent_sum_partial(int n, double gap, const ResolventContext& ctx,
                             const specfun::EvalPolicy& policy = {});

/// Transform-domain solution
///   U(s) = (B s^(alpha-1) u0 + ((1-alpha) s^alpha + alpha) F(s))
///          / (s^alpha D - lambda alpha),
/// with F(s) = int_0^T f(t) e^(-s t) dt by adaptive Gauss-Kronrod.
/// PoleError near the pole, TailError if s T < 20, DomainError if s <= 0.
LaplaceProbe laplace_image(const IVProblem& p, double s);

/// int_0^T u(t) e^(-s t) dt for piecewise-linear u, with exact weights.
double numeric_laplace(const SampledFunction& u, double s);

/// Direct quadrature of int_0^gap e_i(gap - s) e_j(s) ds with
/// e_n(tau) = tau^(n alpha - 1) E^n_{alpha, n alpha}(w tau^alpha).
double kernel_convolution(int i, int j, double alpha, double w, double gap,
                          const specfun::EvalPolicy& policy = {});

}  // namespace abfrac::ivp
