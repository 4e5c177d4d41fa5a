#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace abfrac {

/// Samples of a function of time on the uniform grid t_i = t0 + i dt.
/// Optionally carries samples of the derivative on the same grid.
struct SampledFunction {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<double> values;
  std::optional<std::vector<double>> derivative_values;

  std::size_t size() const { return values.size(); }
  /// Number of grid intervals (size() - 1).
  std::size_t steps() const { return values.empty() ? 0 : values.size() - 1; }
  double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
  double end_time() const { return time(steps()); }

  /// Throws GridError unless dt > 0, values non-empty and the derivative
  /// samples (when present) match in length.
  void validate() const;

  /// Piecewise-linear interpolation; clamps outside the grid.
  double interpolate(double t) const;

  /// Samples fn at n_steps + 1 equispaced points of [t0, t_end].
  static SampledFunction tabulate(const std::function<double(double)>& fn, double t0,
                                  double t_end, std::size_t n_steps);
};

}  // namespace abfrac
