#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlwave/manufactured.hpp"
#include "nlwave/problem.hpp"
#include "nlwave/spectral.hpp"

namespace nlwave::cli {

/// Exit-code contract of every subcommand.
enum ExitCode : int {
  exit_ok = 0,
  exit_conditions = 2,
  exit_no_convergence = 3,
  exit_invalid_input = 4,
};

/// Parsed problem configuration (JSON document, see README for the schema).
struct Config {
  double beta = 3.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  std::optional<double> T;  // required for explicit functions, overrides a preset's choice
  int K = 16;
  int nt = 257;
  int nx = 513;
  double tol = 1e-10;
  int max_iter = 100;
  int threads = 1;
  CouplingMode mode = CouplingMode::ode_consistent;
  std::optional<std::string> preset;
  // expression text or "@path.csv" sample reference, keyed f/phi/psi/h/a
  std::vector<std::pair<std::string, std::string>> functions;
};

/// A config materialised into solver inputs. Preset configs carry the
/// manufactured truth along.
struct LoadedProblem {
  Config config;
  ProblemData problem;
  std::optional<Manufactured> manufactured;
  std::optional<Func1D> a_known;  // for forward runs
};

Config parse_config_file(const std::string& path);
LoadedProblem load_problem(const Config& config, const std::string& base_dir);

/// Shortest-round-trip decimal text of a double (CSV/report determinism).
std::string format_double(double v);

/// Entry point used by the binary and by tests; args excludes argv[0].
int run_cli(const std::vector<std::string>& args);

}  // namespace nlwave::cli
