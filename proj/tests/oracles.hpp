#pragma once

// Reference values computed independently of the library: extended
// precision power series and Boost quadrature.

#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_100;

/// E^delta_{alpha,beta}(z) by the plain power series in 100-digit arithmetic.
/// Good while the largest term stays below ~1e80.
inline double prabhakar(double alpha, double beta, double delta, double z) {
  const Big a(alpha), b(beta), d(delta), x(z);
  Big sum = 0;
  Big poch = 1;   // (delta)_n / n!
  Big power = 1;  // z^n
  Big largest = 0;
  for (int n = 0; n < 5000; ++n) {
    const Big term = poch * power / boost::math::tgamma(a * n + b);
    sum += term;
    largest = std::max(largest, Big(abs(term)));
    if (n > 10 && abs(term) < Big(1e-40) * std::max(Big(1), Big(abs(sum)))) break;
    poch *= (d + n) / Big(n + 1);
    power *= x;
  }
  return static_cast<double>(sum);
}

inline double ml(double alpha, double beta, double z) { return prabhakar(alpha, beta, 1.0, z); }

/// int_a^b f by tanh-sinh; f may be integrably singular at both ends.
template <class F>
double integrate(F f, double a, double b, double tol = 1e-13) {
  boost::math::quadrature::tanh_sinh<double> rule;
  return rule.integrate(f, a, b, tol);
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace oracle
