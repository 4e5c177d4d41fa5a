#pragma once

// Numerical verification suites for the IVP and BVP solvers, run at fixed
// documented parameters.

#include <string>
#include <string_view>
#include <vector>

#include "abfrac/specfun.hpp"

namespace abfrac::verify {

struct Check {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::string name;
  double max_error = 0.0;  ///< of the suite's headline check
  double tolerance = 0.0;
  bool pass = false;       ///< all checks pass
  std::vector<Check> checks;
  double seconds = 0.0;
};

/// lemma, remark, dual, semigroup, pde.
const std::vector<std::string>& suite_names();

/// Runs one suite; "all" is not accepted here. DomainError for unknown names.
SuiteReport run_suite(std::string_view name, const specfun::EvalPolicy& policy = {});

/// Expands "all" to every suite in suite_names() order.
std::vector<SuiteReport> run(std::string_view name, const specfun::EvalPolicy& policy = {});

}  // namespace abfrac::verify
