#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "singular_sl/rhs.hpp"
#include "singular_sl/sampled.hpp"

namespace singular_sl {

enum class EngineChoice { ClosedForm, Galerkin, Both };
enum class ReportFormat { Csv, Json, Both };
enum class Suite { Dirichlet, Neumann, Optimality, Counterexample, Convergence };

std::string to_string(EngineChoice engine);
std::string to_string(ReportFormat format);
std::string to_string(Suite suite);
/// Throws ConfigError on an unknown name.
Suite parse_suite(const std::string& text);

/// Process exit codes of the command layer.
enum ExitCode : int { kExitOk = 0, kExitAssertion = 1, kExitDomain = 2, kExitEngine = 3 };

struct RunConfig {
  std::vector<double> alphas;
  std::vector<LebesgueExponent> ps;
  BoundaryKind bc = BoundaryKind::Neumann;
  /// Rhs selectors understood by rhs::from_selector.
  std::vector<std::string> rhs;
  EngineChoice engine = EngineChoice::ClosedForm;
  int mesh_n = 256;
  /// Grading exponent; 0 selects the default rule.
  double gamma = 0.0;
  double tolerance = 1e-6;
  int samples = 100;
  std::optional<std::uint64_t> seed;
  std::filesystem::path output_dir = "singular_sl_out";
  ReportFormat format = ReportFormat::Both;
};

/// alpha grid {-2, -1, -0.5, -0.25, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9}, p grid
/// {1, 2, inf}, rhs "one", seed 20240611.
RunConfig default_config();

/// Sets one field from text. Keys: alpha, p, bc, rhs, engine, n, gamma,
/// tolerance, samples, seed ("none" clears it), output, format. Lists are
/// comma separated except rhs, which uses ';'. Throws ConfigError.
void set_option(RunConfig& config, const std::string& key, const std::string& value);

/// Reads a key = value file with [section] headers (sections are only
/// grouping) on top of `base`. Throws ConfigError.
RunConfig load_config(const std::filesystem::path& path, RunConfig base = default_config());

/// The resolved configuration as JSON text with sorted keys.
std::string config_json(const RunConfig& config);

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Outcome of one verification suite: the assertions, a JSON document (without
/// timestamp) and CSV tables keyed by file stem.
struct SuiteResult {
  Suite suite = Suite::Dirichlet;
  std::vector<Check> checks;
  std::string json;
  std::map<std::string, std::string> tables;

  bool pass() const;
};

/// Runs the computations of a suite. Throws ConfigError when the configuration
/// admits no cell of the suite or lacks a seed the suite needs.
SuiteResult run_suite(const RunConfig& config, Suite suite);

/// Prints a table of I, K (integer orders) and their derivatives at each y.
/// Returns kExitDomain on a domain error.
int cmd_bessel(double order, const std::vector<double>& ys, std::ostream& out);

/// Solves every (alpha, p, rhs) cell, writes solution tables under the output
/// directory and prints one summary line per cell. kExitOk iff every closed-form
/// residual (and manufactured error) is below the tolerance.
int cmd_solve(const RunConfig& config, std::ostream& out);

/// Runs a suite, writes its report files and prints the checks.
int cmd_verify(const RunConfig& config, Suite suite, std::ostream& out);

}  // namespace singular_sl
