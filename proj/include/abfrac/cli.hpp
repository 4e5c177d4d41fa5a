#pragma once

// Command-line front end: ml | ivp | bvp | verify.
//
// Exit codes: 0 success, 1 verification failure, 2 invalid input,
// 3 special-function non-convergence, 4 singular parameter,
// 5 iteration non-convergence.

#include <exception>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace abfrac::cli {

enum ExitCode {
  kOk = 0,
  kVerifyFailed = 1,
  kInvalid = 2,
  kSpecialFunction = 3,
  kSingular = 4,
  kIteration = 5,
};

/// Parameters of one run, from flags and (optionally) a config file.
struct RunConfig {
  std::string command;
  double alpha = 0.5;
  double beta = 1.0;
  double delta = 1.0;
  double z = 0.0;
  std::string b_norm = "one";
  double lambda = 0.0;
  double u0 = 0.0;
  std::string forcing = "0";
  double horizon = 1.0;
  int steps = 1000;
  std::string method = "closed";
  int max_iters = 50;
  double iter_tol = 1e-8;
  int k_max = 32;
  int nx = 101;
  int nt = 1000;
  int jobs = 1;
  bool verify = false;
  std::string suite = "all";
  bool json = false;
  std::string out;
  std::string format = "csv";
  double abs_tol = 1e-12;
};

/// Reads a flat `key = value` document; '#' starts a comment. Keys are flag
/// names without the leading dashes ('_' and '-' are interchangeable).
/// Throws ValidationError on malformed lines or an unreadable file.
std::map<std::string, std::string> read_config(const std::string& path);

/// Turns config entries into flag tokens ("--key", "value"); "true" becomes
/// a bare flag and "false" is dropped.
std::vector<std::string> config_tokens(const std::map<std::string, std::string>& entries);

/// Maps a library exception to its exit code.
int exit_code_for(const std::exception& e);

/// Full CLI; argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace abfrac::cli
