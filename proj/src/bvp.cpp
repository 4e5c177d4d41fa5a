#include "abfrac/bvp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>
#include <utility>

#include "abfrac/errors.hpp"
#include "abfrac/ivp.hpp"

namespace abfrac::bvp {

namespace {

// sin(k pi x_i) with exact zeros wherever k x_i is an integer
double grid_sine(int k, std::size_t i, std::size_t nx) {
  const std::size_t n = nx - 1;
  const std::size_t r = (static_cast<std::size_t>(k) * i) % (2 * n);
  if (r == 0 || r == n) return 0.0;
  return std::sin(std::numbers::pi * static_cast<double>(r) / static_cast<double>(n));
}

std::vector<double> simpson_weights(std::size_t nx) {
  const double h = 1.0 / static_cast<double>(nx - 1);
  std::vector<double> w(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    const double c = (i == 0 || i == nx - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    w[i] = c * h / 3.0;
  }
  return w;
}

// f(x_i, t_j) stored as values[j * nx + i]
std::vector<double> sample_source(const BVProblem& p) {
  std::vector<double> grid(p.nx * (p.nt + 1));
  for (std::size_t j = 0; j <= p.nt; ++j) {
    const double t = p.t(j);
    for (std::size_t i = 0; i < p.nx; ++i) {
      const double v = p.forcing(p.x(i), t);
      if (!std::isfinite(v)) throw DomainError("source term is not finite on the grid");
      grid[j * p.nx + i] = v;
    }
  }
  return grid;
}

SampledFunction coefficients_from_grid(const std::vector<double>& grid, const BVProblem& p, int k) {
  if (k < 1 || k > p.k_max) {
    throw DomainError("mode index " + std::to_string(k) + " outside 1.." + std::to_string(p.k_max));
  }
  const std::vector<double> w = simpson_weights(p.nx);
  std::vector<double> basis(p.nx);
  for (std::size_t i = 0; i < p.nx; ++i) basis[i] = 2.0 * w[i] * grid_sine(k, i, p.nx);
  SampledFunction fk;
  fk.t0 = 0.0;
  fk.dt = p.dt();
  fk.values.resize(p.nt + 1);
  for (std::size_t j = 0; j <= p.nt; ++j) {
    const double* row = grid.data() + j * p.nx;
    double sum = 0.0;
    for (std::size_t i = 0; i < p.nx; ++i) sum += basis[i] * row[i];
    fk.values[j] = sum;
  }
  return fk;
}

ModalSolution mode_from_coefficients(const BVProblem& p, int k, SampledFunction fk,
                                     const specfun::EvalPolicy& policy) {
  const double kp = static_cast<double>(k) * std::numbers::pi;
  ivp::IVProblem modal;
  modal.cfg = p.cfg;
  modal.lambda = -kp * kp;
  modal.u0 = 0.0;
  modal.horizon = p.horizon;
  modal.forcing = ivp::Forcing::tabulated(fk);

  ModalSolution m;
  m.k = k;
  m.lambda_k = kp * kp;
  m.u_k = ivp::solve_closed_form(modal, p.nt, policy).u;
  m.f_k = std::move(fk);
  return m;
}

}  // namespace

Source::Source() : fn_([](double, double) { return 0.0; }), label_("0") {}

Source Source::expression(expr::Expr e) {
  Source s;
  s.label_ = e.to_string();
  s.fn_ = [e = std::move(e)](double x, double t) { return e.eval(t, x); };
  return s;
}

Source Source::expression(std::string_view src) { return expression(expr::parse(src)); }

Source Source::callable(std::function<double(double, double)> fn, std::string label) {
  if (!fn) throw DomainError("empty source callable");
  Source s;
  s.fn_ = std::move(fn);
  s.label_ = std::move(label);
  return s;
}

BVProblem BVProblem::normalized() const {
  BVProblem q = *this;
  if (q.nx % 2 == 0) ++q.nx;
  return q;
}

double BVProblem::x(std::size_t i) const {
  return i + 1 == nx ? 1.0 : static_cast<double>(i) / static_cast<double>(nx - 1);
}

double BVProblem::t(std::size_t j) const {
  return j == nt ? horizon : horizon * static_cast<double>(j) / static_cast<double>(nt);
}

void BVProblem::validate() const {
  cfg.validate();
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon T must be positive");
  if (k_max < 1) throw GridError("k_max must be at least 1");
  if (nx < 2 * static_cast<std::size_t>(k_max) + 1) {
    throw GridError("nx = " + std::to_string(nx) + " cannot resolve mode " + std::to_string(k_max) +
                    " (need nx >= 2 k_max + 1)");
  }
  if (nt < 2) throw GridError("nt must be at least 2");
}

void Field2D::validate() const {
  if (nx == 0 || nt == 0 || values.size() != nx * (nt + 1)) {
    throw DimensionMismatch("field storage does not match nx x (nt + 1)");
  }
}

SampledFunction sine_coefficients(const BVProblem& p, int k) {
  const BVProblem q = p.normalized();
  q.validate();
  return coefficients_from_grid(sample_source(q), q, k);
}

ModalSolution solve_mode(const BVProblem& p, int k, const specfun::EvalPolicy& policy) {
  const BVProblem q = p.normalized();
  q.validate();
  return mode_from_coefficients(q, k, coefficients_from_grid(sample_source(q), q, k), policy);
}

Field2D assemble(const std::vector<ModalSolution>& modes, const BVProblem& p) {
  const BVProblem q = p.normalized();
  q.validate();
  Field2D field;
  field.nx = q.nx;
  field.nt = q.nt;
  field.horizon = q.horizon;
  field.values.assign(q.nx * (q.nt + 1), 0.0);

  std::vector<const ModalSolution*> ordered(static_cast<std::size_t>(q.k_max), nullptr);
  for (const auto& m : modes) {
    if (m.k < 1 || m.k > q.k_max) throw DimensionMismatch("mode index outside 1..k_max");
    if (m.u_k.size() != q.nt + 1) throw DimensionMismatch("modal grid does not match nt");
    ordered[static_cast<std::size_t>(m.k - 1)] = &m;
  }
  std::vector<double> sines(q.nx);
  for (const ModalSolution* m : ordered) {
    if (!m) throw DimensionMismatch("modes must cover k = 1..k_max");
    for (std::size_t i = 0; i < q.nx; ++i) sines[i] = grid_sine(m->k, i, q.nx);
    for (std::size_t j = 0; j <= q.nt; ++j) {
      const double uk = m->u_k.values[j];
      double* row = field.values.data() + j * q.nx;
      for (std::size_t i = 0; i < q.nx; ++i) row[i] += uk * sines[i];
    }
  }
  return field;
}

std::vector<std::string> check_hypotheses(const BVProblem& p) {
  const BVProblem q = p.normalized();
  double initial = 0.0;
  for (std::size_t i = 0; i < q.nx; ++i) initial = std::max(initial, std::abs(q.forcing(q.x(i), 0.0)));
  double left = 0.0;
  double right = 0.0;
  for (std::size_t j = 0; j <= q.nt; ++j) {
    left = std::max(left, std::abs(q.forcing(0.0, q.t(j))));
    right = std::max(right, std::abs(q.forcing(1.0, q.t(j))));
  }
  std::vector<std::string> warnings;
  auto note = [&](double v, const char* what) {
    if (v > kHypothesisTol) {
      warnings.push_back(std::string(what) + " violated: max |f| = " + std::to_string(v) +
                         "; the series representation is not guaranteed");
    }
  };
  note(initial, "f(x,0) = 0");
  note(left, "f(0,t) = 0");
  note(right, "f(1,t) = 0");
  return warnings;
}

BvpSolution solve(const BVProblem& p, int jobs, const specfun::EvalPolicy& policy) {
  const BVProblem q = p.normalized();
  q.validate();
  const std::vector<double> grid = sample_source(q);

  const auto count = static_cast<std::size_t>(q.k_max);
  std::vector<ModalSolution> modes(count);
  std::vector<std::exception_ptr> failures(count);
  auto work = [&](std::size_t idx) {
    try {
      const int k = static_cast<int>(idx) + 1;
      modes[idx] = mode_from_coefficients(q, k, coefficients_from_grid(grid, q, k), policy);
    } catch (...) {
      failures[idx] = std::current_exception();
    }
  };

  const auto threads = static_cast<std::size_t>(std::clamp(jobs, 1, q.k_max));
  if (threads == 1) {
    for (std::size_t idx = 0; idx < count; ++idx) work(idx);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t n = 0; n < threads; ++n) {
      pool.emplace_back([&] {
        for (std::size_t idx = next++; idx < count; idx = next++) work(idx);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  BvpSolution sol;
  sol.field = assemble(modes, q);
  sol.modes = std::move(modes);
  sol.warnings = check_hypotheses(q);
  return sol;
}

ResidualSummary residual_report(const Field2D& u, const BVProblem& p,
                                const specfun::EvalPolicy& policy) {
  const BVProblem q = p.normalized();
  q.validate();
  u.validate();
  if (u.nx != q.nx || u.nt != q.nt) throw DimensionMismatch("field grid differs from the problem grid");
  if (q.nx < 5 || q.nt < 100) throw GridError("residual report needs nx >= 5 and nt >= 100");

  ResidualSummary r;
  for (std::size_t j = 0; j <= q.nt; ++j) {
    r.boundary = std::max({r.boundary, std::abs(u.at(0, j)), std::abs(u.at(q.nx - 1, j))});
  }
  for (std::size_t i = 0; i < q.nx; ++i) r.initial = std::max(r.initial, std::abs(u.at(i, 0)));

  const std::vector<double> f = sample_source(q);
  for (double v : f) r.forcing_scale = std::max(r.forcing_scale, std::abs(v));

  const double dx = q.dx();
  const double slack = 1e-12;
  const abcalc::AbcOperator abc(q.cfg, q.dt(), q.nt, policy);
  SampledFunction line;
  line.t0 = 0.0;
  line.dt = q.dt();
  line.values.resize(q.nt + 1);
  for (std::size_t i = 1; i + 1 < q.nx; ++i) {
    const double x = q.x(i);
    if (x < 0.1 - slack || x > 0.9 + slack) continue;
    for (std::size_t j = 0; j <= q.nt; ++j) line.values[j] = u.at(i, j);
    const SampledFunction dt_u = abc.apply(line);
    for (std::size_t j = 0; j <= q.nt; ++j) {
      if (q.t(j) < 0.1 * q.horizon * (1.0 - slack)) continue;
      const double uxx = (u.at(i - 1, j) - 2.0 * u.at(i, j) + u.at(i + 1, j)) / (dx * dx);
      const double res = dt_u.values[j] - uxx - f[j * q.nx + i];
      r.pde_absolute = std::max(r.pde_absolute, std::abs(res));
    }
  }
  r.pde = r.forcing_scale > 0.0 ? r.pde_absolute / r.forcing_scale : r.pde_absolute;
  return r;
}

}  // namespace abfrac::bvp
