#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "abfrac/specfun.hpp"

namespace abfrac::abcalc {

/// Exact kernel moments over the cells [m h, (m+1) h] of the lag variable.
///
///   whole[m] = int_cell k(tau) dtau
///   left[m]  = (1/h) int_cell ((m+1) h - tau) k(tau) dtau
///
/// `left` pairs with the hat function of the cell's left end; the right-end
/// hat gets whole[m] - left[m].
struct CellMoments {
  double h = 0.0;
  std::vector<double> whole;
  std::vector<double> left;

  std::size_t cells() const { return whole.size(); }
};

/// k(tau) = tau^(beta-1), beta > 0, in closed form.
CellMoments power_kernel_moments(double beta, double h, std::size_t cells);

/// k(tau) = tau^(beta-1) E_{alpha,beta}(c tau^alpha).
///
/// The first cell uses the integrated forms
///   int_0^h k = h^beta E_{alpha,beta+1}(c h^alpha),
///   int_0^h (h - tau) k = h^(beta+1) E_{alpha,beta+2}(c h^alpha);
/// every later cell is smooth and goes through Gauss-Legendre (16 nodes for
/// cells 1..3, 8 beyond). c == 0 reduces to the scaled power kernel.
CellMoments ml_kernel_moments(double alpha, double beta, double c, double h,
                              std::size_t cells, const specfun::EvalPolicy& policy = {});

/// k(tau) = exp(-rate tau), rate >= 0, in closed form.
CellMoments exponential_kernel_moments(double rate, double h, std::size_t cells);

/// Product integration of a convolution against precomputed cell moments.
///
/// For samples g_0..g_N on the grid t_j = j h:
///   convolve(g, n)            = int_0^{t_n} g(s) k(t_n - s) ds,  g piecewise linear
///   convolve_increments(g, n) = int_0^{t_n} g'(s) k(t_n - s) ds, g piecewise linear
class ProductRule {
 public:
  explicit ProductRule(CellMoments moments);

  double step() const { return moments_.h; }
  std::size_t cells() const { return moments_.cells(); }

  double convolve(std::span<const double> g, std::size_t n) const;
  double convolve_increments(std::span<const double> g, std::size_t n) const;

  /// Both over every grid point 0..g.size()-1; entry 0 is exactly 0.
  std::vector<double> convolve_all(std::span<const double> g) const;
  std::vector<double> convolve_increments_all(std::span<const double> g) const;

  const CellMoments& moments() const { return moments_; }

 private:
  void check(std::span<const double> g, std::size_t n) const;

  CellMoments moments_;
  // weight on g_{n-m} is node_[m] for m < n; g_0 also gets whole[n-1] - left[n-1]
  std::vector<double> node_;
};

}  // namespace abfrac::abcalc
