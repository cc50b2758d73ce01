#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "singular_sl/closed_form_solver.hpp"
#include "singular_sl/galerkin_solver.hpp"
#include "singular_sl/weighted_analysis.hpp"

namespace singular_sl {

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);
/// Inverse of format_number.
double parse_number(const std::string& text);

/// RFC 4180 quoting: fields containing a comma, quote, CR or LF are wrapped in
/// quotes with embedded quotes doubled.
std::string csv_field(const std::string& field);

/// Splits CSV text into records, honouring quoted fields.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> row);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// A solution sampled at its grid nodes, with its JSON header fields.
struct SolutionTable {
  std::string engine;
  std::string rhs;
  double alpha = 0.0;
  BoundaryKind bc = BoundaryKind::Dirichlet;
  LebesgueExponent p = LebesgueExponent::inf();
  double A = 0.0;
  double B = 0.0;
  double residual_max = 0.0;
  std::vector<double> x;
  std::vector<double> u;
  std::vector<double> u_prime;
  std::vector<double> flux;
};

SolutionTable tabulate(const Solution& solution);
/// Nodal values; slopes and fluxes are those of the element to the right of
/// each node (the last node repeats the last element). A, B and residual_max are NaN.
SolutionTable tabulate(const FemSolution& solution, const BvpProblem& problem);

/// Columns x, u, u_prime, flux.
std::string solution_csv(const SolutionTable& table);
/// Keys alpha, bc, p, A, B, residual_max, engine, rhs (sorted).
std::string solution_json(const SolutionTable& table);
/// Rebuilds a table from the two documents written above.
SolutionTable read_solution(const std::string& csv_text, const std::string& json_text);

std::string report_csv(const RegularityReport& report);
std::string report_json(const RegularityReport& report);
std::string profile_csv(const Profile& profile);
std::string scan_csv(const CounterexampleScan& scan);

/// Writes text to path, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// JSON text with every "timestamp" member removed, re-serialised with sorted
/// keys; used to compare reports across runs.
std::string strip_timestamps(const std::string& json_text);

/// Current UTC time as ISO 8601.
std::string utc_timestamp();

}  // namespace singular_sl
