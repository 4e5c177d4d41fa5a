#pragma once

// Time-fractional diffusion on the unit interval:
//
//   ABC D^alpha_t u - u_xx = f(x, t),  u(0, t) = u(1, t) = 0,  u(x, 0) = 0,
//
// solved by expansion in sin(k pi x), each mode being a scalar IVP with
// lambda = -(k pi)^2 and zero initial value.

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "abfrac/abcalc.hpp"
#include "abfrac/expr.hpp"
#include "abfrac/sampled.hpp"
#include "abfrac/specfun.hpp"

namespace abfrac::bvp {

/// Evaluable f(x, t).
class Source {
 public:
  Source();  // f = 0
  static Source expression(expr::Expr e);
  static Source expression(std::string_view src);
  static Source callable(std::function<double(double, double)> fn, std::string label = "callable");

  double operator()(double x, double t) const { return fn_(x, t); }
  const std::string& describe() const { return label_; }

 private:
  std::function<double(double, double)> fn_;
  std::string label_;
};

inline constexpr double kHypothesisTol = 1e-8;

struct BVProblem {
  Source forcing;
  double horizon = 1.0;
  abcalc::ABConfig cfg;
  int k_max = 32;
  std::size_t nx = 101;  ///< spatial points, including both ends
  std::size_t nt = 1000; ///< time steps

  /// Copy with nx raised to the next odd number when even.
  BVProblem normalized() const;
  double dx() const { return 1.0 / static_cast<double>(nx - 1); }
  double dt() const { return horizon / static_cast<double>(nt); }
  double x(std::size_t i) const;
  double t(std::size_t j) const;

  /// DomainError for bad alpha/B/T, GridError unless k_max >= 1,
  /// nx >= 2 k_max + 1 and nt >= 2.
  void validate() const;
};

struct ModalSolution {
  int k = 0;
  double lambda_k = 0.0;  ///< (k pi)^2
  SampledFunction f_k;
  SampledFunction u_k;
};

/// u(x_i, t_j) stored row-major by time: values[j * nx + i], j = 0..nt.
struct Field2D {
  std::size_t nx = 0;
  std::size_t nt = 0;
  double horizon = 1.0;
  std::vector<double> values;

  std::size_t rows() const { return nt + 1; }
  double at(std::size_t i, std::size_t j) const { return values[j * nx + i]; }
  double& at(std::size_t i, std::size_t j) { return values[j * nx + i]; }
  /// Throws DimensionMismatch unless values.size() == nx (nt + 1) and both are positive.
  void validate() const;
};

struct ResidualSummary {
  double boundary = 0.0;  ///< max |u(0,t)|, |u(1,t)|
  double initial = 0.0;   ///< max |u(x,0)|
  double pde = 0.0;       ///< max interior residual / max |f| (absolute when f = 0)
  double pde_absolute = 0.0;
  double forcing_scale = 0.0;
};

struct BvpSolution {
  Field2D field;
  std::vector<ModalSolution> modes;
  /// Violated sufficient conditions f(x,0) = 0, f(0,t) = f(1,t) = 0.
  std::vector<std::string> warnings;
};

/// f_k(t_j) = 2 int_0^1 f(x, t_j) sin(k pi x) dx by composite Simpson over nx points.
SampledFunction sine_coefficients(const BVProblem& p, int k);

/// u_k from the closed-form IVP solver with lambda = -(k pi)^2, u0 = 0.
ModalSolution solve_mode(const BVProblem& p, int k, const specfun::EvalPolicy& policy = {});

/// u(x_i, t_j) = sum_{k} u_k(t_j) sin(k pi x_i), summed in ascending k.
Field2D assemble(const std::vector<ModalSolution>& modes, const BVProblem& p);

/// Numerical checks of f(x,0) = 0 and f(0,t) = f(1,t) = 0 at kHypothesisTol.
std::vector<std::string> check_hypotheses(const BVProblem& p);

/// Modes 1..k_max, optionally solved on `jobs` threads; the result does not
/// depend on jobs.
BvpSolution solve(const BVProblem& p, int jobs = 1, const specfun::EvalPolicy& policy = {});

/// Boundary and initial traces plus the interior residual on
/// [0.1, 0.9] x [0.1 T, T], with abc_derivative along each x-line and
/// second-order central differences in x. GridError unless nx >= 5, nt >= 100.
ResidualSummary residual_report(const Field2D& u, const BVProblem& p,
                                const specfun::EvalPolicy& policy = {});

}  // namespace abfrac::bvp
