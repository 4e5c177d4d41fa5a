#include "abfrac/product_rule.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>

#include "abfrac/errors.hpp"

namespace abfrac::abcalc {

namespace {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

template <unsigned Points>
GaussRule make_gauss_rule() {
  using Rule = boost::math::quadrature::gauss<double, Points>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  GaussRule rule;
  for (std::size_t i = 0; i < x.size(); ++i) {
    rule.nodes.push_back(x[i]);
    rule.weights.push_back(w[i]);
    if (x[i] != 0.0) {
      rule.nodes.push_back(-x[i]);
      rule.weights.push_back(w[i]);
    }
  }
  return rule;
}

const GaussRule& gauss8() {
  static const GaussRule rule = make_gauss_rule<8>();
  return rule;
}

const GaussRule& gauss16() {
  static const GaussRule rule = make_gauss_rule<16>();
  return rule;
}

void check_cells(double h, std::size_t cells) {
  if (!(h > 0.0) || !std::isfinite(h)) throw GridError("kernel moments: step must be > 0");
  if (cells == 0) throw GridError("kernel moments: need at least one cell");
}

}  // namespace

CellMoments power_kernel_moments(double beta, double h, std::size_t cells) {
  check_cells(h, cells);
  if (!(beta > 0.0)) throw DomainError("power kernel: beta must be > 0");
  CellMoments out;
  out.h = h;
  out.whole.resize(cells);
  out.left.resize(cells);
  const double hb = std::pow(h, beta);
  for (std::size_t m = 0; m < cells; ++m) {
    const double a = static_cast<double>(m);
    const double b = a + 1.0;
    const double pa = std::pow(a, beta);
    const double pb = std::pow(b, beta);
    out.whole[m] = hb * (pb - pa) / beta;
    // (1/h) int_{a h}^{b h} (b h - tau) tau^(beta-1) dtau
    out.left[m] = hb * (b * (pb - pa) / beta - (b * pb - a * pa) / (beta + 1.0));
  }
  return out;
}

CellMoments ml_kernel_moments(double alpha, double beta, double c, double h,
                              std::size_t cells, const specfun::EvalPolicy& policy) {
  check_cells(h, cells);
  if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("ML kernel: alpha, beta must be > 0");
  if (c == 0.0) {
    CellMoments out = power_kernel_moments(beta, h, cells);
    const double scale = specfun::rgamma(beta);
    for (auto& v : out.whole) v *= scale;
    for (auto& v : out.left) v *= scale;
    return out;
  }

  CellMoments out;
  out.h = h;
  out.whole.resize(cells);
  out.left.resize(cells);

  const double ha = std::pow(h, alpha);
  const double hb = std::pow(h, beta);
  out.whole[0] = hb * specfun::ml2(alpha, beta + 1.0, c * ha, policy);
  out.left[0] = hb * specfun::ml2(alpha, beta + 2.0, c * ha, policy);

  auto kernel = [&](double tau) {
    return std::pow(tau, beta - 1.0) * specfun::ml2(alpha, beta, c * std::pow(tau, alpha), policy);
  };
  for (std::size_t m = 1; m < cells; ++m) {
    const GaussRule& rule = m <= 3 ? gauss16() : gauss8();
    const double lo = static_cast<double>(m) * h;
    const double hi = lo + h;
    const double mid = 0.5 * (lo + hi);
    double whole = 0.0;
    double left = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double tau = mid + 0.5 * h * rule.nodes[q];
      const double wk = rule.weights[q] * kernel(tau);
      whole += wk;
      left += wk * (hi - tau);
    }
    out.whole[m] = 0.5 * h * whole;
    out.left[m] = 0.5 * left;
  }
  return out;
}

CellMoments exponential_kernel_moments(double rate, double h, std::size_t cells) {
  check_cells(h, cells);
  if (!(rate >= 0.0)) throw DomainError("exponential kernel: rate must be >= 0");
  CellMoments out;
  out.h = h;
  out.whole.resize(cells);
  out.left.resize(cells);
  const double x = rate * h;
  // int_0^h e^{-rate s} ds and (1/h) int_0^h (h - s) e^{-rate s} ds
  double base_whole = h;
  double base_left = 0.5 * h;
  if (x > 0.0) {
    base_whole = -std::expm1(-x) / rate;
    base_left = (x + std::expm1(-x)) / (rate * x);
  }
  for (std::size_t m = 0; m < cells; ++m) {
    const double decay = std::exp(-x * static_cast<double>(m));
    out.whole[m] = decay * base_whole;
    out.left[m] = decay * base_left;
  }
  return out;
}

ProductRule::ProductRule(CellMoments moments) : moments_(std::move(moments)) {
  const std::size_t cells = moments_.cells();
  if (cells == 0 || moments_.left.size() != cells) {
    throw DimensionMismatch("product rule: inconsistent cell moments");
  }
  node_.resize(cells);
  node_[0] = moments_.left[0];
  for (std::size_t m = 1; m < cells; ++m) {
    node_[m] = moments_.left[m] + (moments_.whole[m - 1] - moments_.left[m - 1]);
  }
}

void ProductRule::check(std::span<const double> g, std::size_t n) const {
  if (n >= g.size()) throw GridError("product rule: index outside the sample range");
  if (n > cells()) {
    throw GridError("product rule: grid longer than the precomputed kernel (" +
                    std::to_string(cells()) + " cells)");
  }
}

double ProductRule::convolve(std::span<const double> g, std::size_t n) const {
  check(g, n);
  if (n == 0) return 0.0;
  double acc = 0.0;
  for (std::size_t m = 0; m < n; ++m) acc += node_[m] * g[n - m];
  acc += (moments_.whole[n - 1] - moments_.left[n - 1]) * g[0];
  return acc;
}

double ProductRule::convolve_increments(std::span<const double> g, std::size_t n) const {
  check(g, n);
  double acc = 0.0;
  for (std::size_t m = 0; m < n; ++m) acc += moments_.whole[m] * (g[n - m] - g[n - m - 1]);
  return acc / moments_.h;
}

std::vector<double> ProductRule::convolve_all(std::span<const double> g) const {
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t n = 1; n < g.size(); ++n) out[n] = convolve(g, n);
  return out;
}

std::vector<double> ProductRule::convolve_increments_all(std::span<const double> g) const {
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t n = 1; n < g.size(); ++n) out[n] = convolve_increments(g, n);
  return out;
}

}  // namespace abfrac::abcalc
