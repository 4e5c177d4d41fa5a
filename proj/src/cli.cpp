#include "abfrac/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "abfrac/abcalc.hpp"
#include "abfrac/bvp.hpp"
#include "abfrac/errors.hpp"
#include "abfrac/expr.hpp"
#include "abfrac/ivp.hpp"
#include "abfrac/specfun.hpp"
#include "abfrac/verify.hpp"

namespace abfrac::cli {

namespace {

const char* const kSubcommands[] = {"ml", "ivp", "bvp", "verify"};

std::string fmt(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string csv_num(double v) { return fmt(v, 15); }
std::string json_num(double v) { return fmt(v, 17); }
std::string json_str(const std::string& s) { return nlohmann::json(s).dump(); }

std::string json_array(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += json_num(v[i]);
  }
  out += ']';
  return out;
}

/// Insertion-ordered JSON object with preformatted member values.
class JsonObject {
 public:
  JsonObject& raw(const std::string& key, std::string value) {
    members_.emplace_back(key, std::move(value));
    return *this;
  }
  JsonObject& num(const std::string& key, double v) { return raw(key, json_num(v)); }
  JsonObject& integer(const std::string& key, long long v) { return raw(key, std::to_string(v)); }
  JsonObject& str(const std::string& key, const std::string& v) { return raw(key, json_str(v)); }
  JsonObject& boolean(const std::string& key, bool v) { return raw(key, v ? "true" : "false"); }

  std::string dump() const {
    std::string out = "{";
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (i) out += ',';
      out += json_str(members_[i].first) + ':' + members_[i].second;
    }
    out += '}';
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> members_;
};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double default_tolerance() {
  const char* env = std::getenv("ABFRAC_DEFAULT_TOL");
  if (!env || !*env) return specfun::EvalPolicy{}.abs_tol;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
    throw ValidationError(std::string("ABFRAC_DEFAULT_TOL must be a positive number, got '") + env + "'");
  }
  return v;
}

specfun::EvalPolicy policy_for(const RunConfig& cfg) {
  specfun::EvalPolicy policy;
  policy.abs_tol = cfg.abs_tol;
  policy.validate();
  return policy;
}

abcalc::ABConfig ab_config(const RunConfig& cfg) {
  const auto kind = cfg.b_norm == "ab_family" ? abcalc::Normalization::kAbFamily
                                              : abcalc::Normalization::kOne;
  return abcalc::ABConfig::make(cfg.alpha, kind);
}

/// Destination for data: --out file or the given stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw ValidationError("cannot open output file '" + path + "'");
    stream_ = file_.get();
  }
  std::ostream& get() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw ValidationError("failed writing output");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

JsonObject base_meta(const RunConfig& cfg) {
  JsonObject meta;
  meta.str("command", cfg.command);
  return meta;
}

double grid_time(double horizon, std::size_t n, std::size_t j) {
  return j == n ? horizon : horizon * static_cast<double>(j) / static_cast<double>(n);
}

int cmd_ml(const RunConfig& cfg, std::ostream& out) {
  const double v = specfun::ml3(cfg.alpha, cfg.beta, cfg.delta, cfg.z, policy_for(cfg));
  out << csv_num(v) << '\n';
  return kOk;
}

int cmd_ivp(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto policy = policy_for(cfg);
  const expr::Expr forcing = expr::parse(cfg.forcing);
  if (forcing.uses_x()) throw ValidationError("ivp forcing may depend on t only");

  ivp::IVProblem p;
  p.cfg = ab_config(cfg);
  p.lambda = cfg.lambda;
  p.u0 = cfg.u0;
  p.horizon = cfg.horizon;
  p.forcing = ivp::Forcing::expression(forcing);
  p.validate();
  const auto n = static_cast<std::size_t>(cfg.steps);

  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::vector<double> t(n + 1);
  for (std::size_t j = 0; j <= n; ++j) t[j] = grid_time(p.horizon, n, j);
  names.push_back("t");
  columns.push_back(t);

  const double compat = p.compatibility_residual();
  JsonObject meta = base_meta(cfg);
  meta.num("alpha", cfg.alpha)
      .str("b_norm", cfg.b_norm)
      .num("b_of_alpha", p.cfg.b_of_alpha)
      .num("lambda", cfg.lambda)
      .num("u0", cfg.u0)
      .str("forcing", forcing.to_string())
      .num("horizon", cfg.horizon)
      .integer("steps", cfg.steps)
      .str("method", cfg.method)
      .num("abs_tol", cfg.abs_tol)
      .num("compatibility_residual", compat);
  err << "compatibility residual |f(0) + lambda u0| = " << fmt(compat, 6) << '\n';
  if (compat > ivp::kCompatibilityTol) {
    err << "warning: f(0) != -lambda u0; the solution does not attain u0 at t = 0\n";
  }

  if (cfg.method == "closed") {
    const auto sol = ivp::solve_closed_form(p, n, policy);
    names.push_back("u");
    columns.push_back(sol.u.values);
    meta.num("initial_jump", sol.initial_jump);
  } else if (cfg.method == "picard") {
    const auto sol = ivp::picard_solve(p, n, cfg.max_iters, cfg.iter_tol, policy);
    names.push_back("u");
    columns.push_back(sol.u.values);
    meta.integer("max_iters", cfg.max_iters).num("iter_tol", cfg.iter_tol).integer("iterations", sol.iterations);
    err << "picard iterations = " << sol.iterations << '\n';
  } else {
    const auto closed = ivp::solve_closed_form(p, n, policy);
    const auto picard = ivp::picard_solve(p, n, cfg.max_iters, cfg.iter_tol, policy);
    std::vector<double> diff(n + 1);
    double sup = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      diff[j] = std::abs(closed.u.values[j] - picard.u.values[j]);
      sup = std::max(sup, diff[j]);
    }
    names.insert(names.end(), {"u_closed", "u_picard", "abs_diff"});
    columns.push_back(closed.u.values);
    columns.push_back(picard.u.values);
    columns.push_back(diff);
    meta.integer("max_iters", cfg.max_iters)
        .num("iter_tol", cfg.iter_tol)
        .integer("iterations", picard.iterations)
        .num("sup_diff", sup);
    err << "picard iterations = " << picard.iterations << '\n';
    err << "sup-norm |closed - picard| = " << fmt(sup, 6) << '\n';
  }

  Sink sink(cfg.out, out);
  std::ostream& os = sink.get();
  if (cfg.format == "json") {
    JsonObject data;
    for (std::size_t c = 0; c < names.size(); ++c) data.raw(names[c], json_array(columns[c]));
    os << JsonObject().raw("meta", meta.dump()).raw("data", data.dump()).dump() << '\n';
  } else {
    for (std::size_t c = 0; c < names.size(); ++c) os << (c ? "," : "") << names[c];
    os << '\n';
    for (std::size_t j = 0; j <= n; ++j) {
      for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << csv_num(columns[c][j]);
      os << '\n';
    }
  }
  sink.finish();
  return kOk;
}

int cmd_bvp(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto policy = policy_for(cfg);
  bvp::BVProblem p;
  p.forcing = bvp::Source::expression(cfg.forcing);
  p.cfg = ab_config(cfg);
  p.horizon = cfg.horizon;
  p.k_max = cfg.k_max;
  p.nx = static_cast<std::size_t>(cfg.nx);
  p.nt = static_cast<std::size_t>(cfg.nt);
  p = p.normalized();
  p.validate();

  const auto sol = bvp::solve(p, cfg.jobs, policy);
  for (const auto& w : sol.warnings) err << "warning: " << w << '\n';

  JsonObject meta = base_meta(cfg);
  meta.num("alpha", cfg.alpha)
      .str("b_norm", cfg.b_norm)
      .num("b_of_alpha", p.cfg.b_of_alpha)
      .str("forcing", p.forcing.describe())
      .num("horizon", p.horizon)
      .integer("k_max", p.k_max)
      .integer("nx", static_cast<long long>(p.nx))
      .integer("nt", static_cast<long long>(p.nt))
      .num("abs_tol", cfg.abs_tol);
  std::string warnings = "[";
  for (std::size_t i = 0; i < sol.warnings.size(); ++i) warnings += (i ? "," : "") + json_str(sol.warnings[i]);
  meta.raw("warnings", warnings + "]");

  if (cfg.verify) {
    const auto r = bvp::residual_report(sol.field, p, policy);
    err << "boundary residual = " << fmt(r.boundary, 6) << '\n'
        << "initial residual = " << fmt(r.initial, 6) << '\n'
        << "pde residual (relative) = " << fmt(r.pde, 6) << '\n';
    meta.raw("residuals", JsonObject()
                              .num("boundary", r.boundary)
                              .num("initial", r.initial)
                              .num("pde", r.pde)
                              .num("pde_absolute", r.pde_absolute)
                              .dump());
  }

  const auto& f = sol.field;
  Sink sink(cfg.out, out);
  std::ostream& os = sink.get();
  if (cfg.format == "json") {
    std::vector<double> xs(f.nx);
    std::vector<double> ts(f.rows());
    for (std::size_t i = 0; i < f.nx; ++i) xs[i] = p.x(i);
    for (std::size_t j = 0; j < f.rows(); ++j) ts[j] = p.t(j);
    std::string rows = "[";
    for (std::size_t j = 0; j < f.rows(); ++j) {
      if (j) rows += ',';
      rows += json_array(std::vector<double>(f.values.begin() + static_cast<std::ptrdiff_t>(j * f.nx),
                                             f.values.begin() + static_cast<std::ptrdiff_t>((j + 1) * f.nx)));
    }
    rows += ']';
    const JsonObject data = JsonObject().raw("x", json_array(xs)).raw("t", json_array(ts)).raw("u", rows);
    os << JsonObject().raw("meta", meta.dump()).raw("data", data.dump()).dump() << '\n';
  } else {
    os << "x,t,u\n";
    for (std::size_t j = 0; j < f.rows(); ++j) {
      const std::string t = csv_num(p.t(j));
      for (std::size_t i = 0; i < f.nx; ++i) {
        os << csv_num(p.x(i)) << ',' << t << ',' << csv_num(f.at(i, j)) << '\n';
      }
    }
  }
  sink.finish();
  return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto reports = verify::run(cfg.suite, policy_for(cfg));
  const bool pass = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
  if (cfg.json) {
    std::string suites = "[";
    for (std::size_t s = 0; s < reports.size(); ++s) {
      const auto& r = reports[s];
      std::string checks = "[";
      for (std::size_t c = 0; c < r.checks.size(); ++c) {
        const auto& ch = r.checks[c];
        checks += (c ? "," : "") + JsonObject()
                                       .str("name", ch.name)
                                       .num("max_error", ch.max_error)
                                       .num("tolerance", ch.tolerance)
                                       .boolean("pass", ch.pass)
                                       .dump();
      }
      checks += ']';
      suites += (s ? "," : "") + JsonObject()
                                     .str("name", r.name)
                                     .num("max_error", r.max_error)
                                     .num("tolerance", r.tolerance)
                                     .boolean("pass", r.pass)
                                     .raw("checks", checks)
                                     .dump();
    }
    suites += ']';
    out << JsonObject().raw("suites", suites).boolean("pass", pass).dump() << '\n';
  } else {
    for (const auto& r : reports) {
      out << (r.pass ? "PASS " : "FAIL ") << r.name << "  max_error=" << fmt(r.max_error, 3)
          << " tolerance=" << fmt(r.tolerance, 3) << " (" << fmt(r.seconds, 3) << " s)\n";
      for (const auto& ch : r.checks) {
        out << "    " << (ch.pass ? "pass " : "FAIL ") << ch.name << ": " << fmt(ch.max_error, 3)
            << " <= " << fmt(ch.tolerance, 3) << '\n';
      }
    }
  }
  return pass ? kOk : kVerifyFailed;
}

/// Splices config-file tokens in right after the subcommand so that later
/// command-line flags take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config") {
      if (i + 1 >= args.size()) throw ValidationError("--config needs a file path");
      path = args[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      path = a.substr(9);
    } else {
      rest.push_back(a);
    }
  }
  if (path.empty()) return rest;
  const auto tokens = config_tokens(read_config(path));
  auto sub = std::find_if(rest.begin(), rest.end(), [](const std::string& a) {
    return std::find(std::begin(kSubcommands), std::end(kSubcommands), a) != std::end(kSubcommands);
  });
  if (sub == rest.end()) throw ValidationError("--config needs a subcommand");
  rest.insert(sub + 1, tokens.begin(), tokens.end());
  return rest;
}

}  // namespace

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> entries;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(path + ":" + std::to_string(number) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    while (!key.empty() && key.front() == '-') key.erase(0, 1);
    std::replace(key.begin(), key.end(), '_', '-');
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) throw ValidationError(path + ":" + std::to_string(number) + ": empty key");
    if (key == "config") throw ValidationError(path + ": config files cannot be nested");
    entries[key] = value;
  }
  return entries;
}

std::vector<std::string> config_tokens(const std::map<std::string, std::string>& entries) {
  std::vector<std::string> tokens;
  for (const auto& [key, value] : entries) {
    if (value == "false") continue;
    tokens.push_back("--" + key);
    if (value != "true") tokens.push_back(value);
  }
  return tokens;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const SingularParameter*>(&e)) return kSingular;
  if (dynamic_cast<const NoConvergence*>(&e)) return kIteration;
  if (dynamic_cast<const NonConvergence*>(&e)) return kSpecialFunction;
  return kInvalid;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Explicit solutions of Atangana-Baleanu fractional initial value problems", "abfrac"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "Flat key = value file; flags override its entries");

  auto add_tol = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.abs_tol, "Absolute tolerance of special-function evaluation")
        ->check(CLI::PositiveNumber);
  };
  auto add_ab = [&](CLI::App* sub) {
    sub->add_option("--alpha", cfg.alpha, "Fractional order in (0, 1)")->required();
    sub->add_option("--b-norm", cfg.b_norm, "Normalization B(alpha)")
        ->check(CLI::IsMember({"one", "ab_family"}));
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Output file (default: standard output)");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* ml = app.add_subcommand("ml", "Evaluate the Mittag-Leffler function E^delta_{alpha,beta}(z)");
  ml->add_option("--alpha", cfg.alpha, "alpha in (0, 2]")->required();
  ml->add_option("--beta", cfg.beta, "beta > 0");
  ml->add_option("--delta", cfg.delta, "delta > 0");
  ml->add_option("--z", cfg.z, "Real argument")->required();
  add_tol(ml);

  auto* iv = app.add_subcommand("ivp", "Solve ABC D^alpha u = lambda u + f(t), u(0) = u0");
  add_ab(iv);
  iv->add_option("--lambda", cfg.lambda, "Coefficient lambda");
  iv->add_option("--u0", cfg.u0, "Initial value");
  iv->add_option("--forcing", cfg.forcing, "Expression in t")->required();
  iv->add_option("--horizon", cfg.horizon, "Final time T > 0")->check(CLI::PositiveNumber);
  iv->add_option("--steps", cfg.steps, "Number of time steps")->check(CLI::Range(2, 10000000));
  iv->add_option("--method", cfg.method, "Solver")->check(CLI::IsMember({"closed", "picard", "both"}));
  iv->add_option("--max-iters", cfg.max_iters, "Picard iteration budget")->check(CLI::Range(1, 100000));
  iv->add_option("--iter-tol", cfg.iter_tol, "Picard sup-norm stopping tolerance")->check(CLI::PositiveNumber);
  add_output(iv);
  add_tol(iv);

  auto* bv = app.add_subcommand("bvp", "Solve ABC D^alpha_t u - u_xx = f(x, t) on (0, 1) x (0, T]");
  add_ab(bv);
  bv->add_option("--forcing", cfg.forcing, "Expression in x and t")->required();
  bv->add_option("--horizon", cfg.horizon, "Final time T > 0")->check(CLI::PositiveNumber);
  bv->add_option("--kmax", cfg.k_max, "Number of sine modes")->check(CLI::Range(1, 100000));
  bv->add_option("--nx", cfg.nx, "Spatial points (raised to odd)")->check(CLI::Range(3, 10000000));
  bv->add_option("--nt", cfg.nt, "Time steps")->check(CLI::Range(2, 10000000));
  bv->add_option("--jobs", cfg.jobs, "Threads for the modal solves")->check(CLI::Range(1, 1024));
  bv->add_flag("--verify", cfg.verify, "Append boundary, initial and PDE residuals");
  add_output(bv);
  add_tol(bv);

  auto* ve = app.add_subcommand("verify", "Run the numerical verification suites");
  ve->add_option("--suite", cfg.suite, "Suite to run")
      ->check(CLI::IsMember({"lemma", "remark", "dual", "semigroup", "pde", "all"}));
  ve->add_flag("--json", cfg.json, "Machine-readable report");
  add_tol(ve);

  try {
    cfg.abs_tol = default_tolerance();
    std::vector<std::string> tokens = expand_config(args);
    std::reverse(tokens.begin(), tokens.end());
    app.parse(tokens);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }

  try {
    if (ml->parsed()) {
      cfg.command = "ml";
      return cmd_ml(cfg, out);
    }
    if (iv->parsed()) {
      cfg.command = "ivp";
      return cmd_ivp(cfg, out, err);
    }
    if (bv->parsed()) {
      cfg.command = "bvp";
      return cmd_bvp(cfg, out, err);
    }
    cfg.command = "verify";
    return cmd_verify(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace abfrac::cli
