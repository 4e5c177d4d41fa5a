#include "abfrac/sampled.hpp"

#include <algorithm>
#include <cmath>

#include "abfrac/errors.hpp"

namespace abfrac {

void SampledFunction::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw GridError("sampled function: dt must be > 0");
  if (values.empty()) throw GridError("sampled function: no samples");
  if (derivative_values && derivative_values->size() != values.size()) {
    throw GridError("sampled function: derivative samples do not match value samples");
  }
}

double SampledFunction::interpolate(double t) const {
  if (values.empty()) throw GridError("sampled function: no samples");
  if (values.size() == 1) return values.front();
  const double pos = (t - t0) / dt;
  if (pos <= 0.0) return values.front();
  const auto last = static_cast<double>(values.size() - 1);
  if (pos >= last) return values.back();
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(i);
  if (frac == 0.0) return values[i];
  return values[i] + frac * (values[i + 1] - values[i]);
}

SampledFunction SampledFunction::tabulate(const std::function<double(double)>& fn, double t0,
                                          double t_end, std::size_t n_steps) {
  if (n_steps < 1) throw GridError("tabulate: need at least one step");
  if (!(t_end > t0)) throw GridError("tabulate: empty time interval");
  SampledFunction out;
  out.t0 = t0;
  out.dt = (t_end - t0) / static_cast<double>(n_steps);
  out.values.resize(n_steps + 1);
  for (std::size_t i = 0; i <= n_steps; ++i) out.values[i] = fn(out.time(i));
  return out;
}

}  // namespace abfrac
