#include "singular_sl/report_io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json_convert.hpp"
#include "singular_sl/errors.hpp"

namespace singular_sl {
namespace detail {

Json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

Json to_json(const RegularityReport& report) {
  Json j;
  j["alpha"] = report.alpha;
  j["bc"] = to_string(report.bc);
  j["p"] = report.p.to_string();
  j["rhs"] = report.rhs;
  j["engine"] = report.engine == SampledSolution::Engine::ClosedForm ? "closed_form" : "galerkin";
  for (const auto& [k, v] : report.norms) j["norms"][k] = number(v);
  for (const auto& [k, v] : report.ratios) j["ratios"][k] = number(v);
  for (const auto& [k, v] : report.divergent) j["divergent"][k] = v;
  return j;
}

Json to_json(const RatioStudy& study) {
  Json j;
  j["alpha"] = study.alpha;
  j["bc"] = to_string(study.bc);
  j["p"] = study.p.to_string();
  j["seed"] = study.seed;
  j["samples"] = study.samples;
  j["asserted"] = study.asserted;
  j["divergent_flags"] = study.divergent_flags;
  j["pass"] = study.pass;
  for (const auto& [k, s] : study.summary) {
    j["summary"][k] = {{"max", number(s.max)},
                       {"median", number(s.median)},
                       {"all_finite", s.all_finite},
                       {"bounded", s.bounded}};
  }
  return j;
}

Json to_json(const Profile& profile) {
  Json j;
  j["alpha"] = profile.alpha;
  j["p"] = profile.p.to_string();
  j["seed"] = profile.seed;
  j["samples"] = profile.samples;
  j["reference"] = number(profile.reference);
  j["envelope_spread"] = number(profile.envelope_spread());
  j["rows"] = Json::array();
  for (const ProfileRow& r : profile.rows) {
    j["rows"].push_back({{"x", r.x}, {"lower_bound", number(r.lower_bound)},
                         {"upper_envelope", number(r.upper_envelope)}});
  }
  return j;
}

Json to_json(const CounterexampleScan& scan) {
  Json j;
  j["alpha"] = scan.alpha;
  j["rhs"] = scan.rhs;
  j["slope"] = number(scan.slope);
  j["intercept"] = number(scan.intercept);
  j["f_l1"] = number(scan.f_l1);
  j["rows"] = Json::array();
  for (const ScanRow& r : scan.rows) j["rows"].push_back({{"delta", r.delta}, {"integral", number(r.integral)}});
  return j;
}

Json solution_header(const SolutionTable& t) {
  return Json{{"alpha", t.alpha},
              {"bc", to_string(t.bc)},
              {"p", t.p.to_string()},
              {"A", number(t.A)},
              {"B", number(t.B)},
              {"residual_max", number(t.residual_max)},
              {"engine", t.engine},
              {"rhs", t.rhs}};
}

}  // namespace detail

namespace {

double json_number(const detail::Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_number(j.get<std::string>());
  return std::numeric_limits<double>::quiet_NaN();
}

void erase_timestamps(detail::Json& j) {
  if (j.is_object()) {
    j.erase("timestamp");
    for (auto& [key, value] : j.items()) erase_timestamps(value);
  } else if (j.is_array()) {
    for (auto& value : j) erase_timestamps(value);
  }
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw DomainError("parse_number: cannot parse '" + text + "'");
  }
  return v;
}

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool pending = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    pending = true;
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
      pending = false;
    } else {
      field += c;
    }
  }
  if (pending || !field.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::invalid_argument("CsvTable: row width mismatch");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::ostringstream os;
  auto line = [&os](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os << ',';
      os << csv_field(fields[i]);
    }
    os << "\r\n";
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return os.str();
}

SolutionTable tabulate(const Solution& solution) {
  SolutionTable t;
  const BvpProblem& pb = solution.problem();
  const SampledSolution& s = solution.sampled();
  t.engine = "closed_form";
  t.rhs = pb.f().name();
  t.alpha = pb.alpha().value();
  t.bc = pb.bc();
  t.p = pb.p();
  t.A = solution.A();
  t.B = solution.B();
  t.residual_max = solution.residual_max();
  t.x = s.grid.x();
  t.u = s.u;
  t.u_prime = s.du;
  t.flux = s.flux;
  return t;
}

SolutionTable tabulate(const FemSolution& solution, const BvpProblem& problem) {
  SolutionTable t;
  t.engine = "galerkin";
  t.rhs = problem.f().name();
  t.alpha = solution.alpha;
  t.bc = solution.bc;
  t.p = problem.p();
  t.A = t.B = t.residual_max = std::numeric_limits<double>::quiet_NaN();
  const std::vector<double>& nodes = solution.mesh.nodes;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::size_t e = std::min(i, solution.slopes.size() - 1);
    t.x.push_back(nodes[i]);
    t.u.push_back(solution.nodal[i]);
    t.u_prime.push_back(solution.slopes[e]);
    t.flux.push_back(std::pow(nodes[i], 2.0 * solution.alpha) * solution.slopes[e]);
  }
  return t;
}

std::string solution_csv(const SolutionTable& t) {
  CsvTable table({"x", "u", "u_prime", "flux"});
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    table.add_row({format_number(t.x[i]), format_number(t.u[i]), format_number(t.u_prime[i]),
                   format_number(t.flux[i])});
  }
  return table.str();
}

std::string solution_json(const SolutionTable& t) { return detail::solution_header(t).dump(2) + "\n"; }

SolutionTable read_solution(const std::string& csv_text, const std::string& json_text) {
  SolutionTable t;
  const detail::Json j = detail::Json::parse(json_text);
  t.alpha = j.at("alpha").get<double>();
  t.bc = parse_boundary_kind(j.at("bc").get<std::string>());
  t.p = LebesgueExponent::parse(j.at("p").get<std::string>());
  t.A = json_number(j.at("A"));
  t.B = json_number(j.at("B"));
  t.residual_max = json_number(j.at("residual_max"));
  t.engine = j.at("engine").get<std::string>();
  t.rhs = j.at("rhs").get<std::string>();
  const auto records = parse_csv(csv_text);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != 4) throw DomainError("read_solution: expected 4 columns");
    t.x.push_back(parse_number(rec[0]));
    t.u.push_back(parse_number(rec[1]));
    t.u_prime.push_back(parse_number(rec[2]));
    t.flux.push_back(parse_number(rec[3]));
  }
  return t;
}

std::string report_csv(const RegularityReport& report) {
  CsvTable table({"quantity", "norm", "ratio", "divergent"});
  for (const auto& [key, value] : report.norms) {
    const auto r = report.ratios.find(key);
    table.add_row({key, format_number(value), r == report.ratios.end() ? "" : format_number(r->second),
                   report.divergent.at(key) ? "true" : "false"});
  }
  return table.str();
}

std::string report_json(const RegularityReport& report) { return detail::to_json(report).dump(2) + "\n"; }

std::string profile_csv(const Profile& profile) {
  CsvTable table({"x", "lower_bound", "upper_envelope"});
  for (const ProfileRow& r : profile.rows) {
    table.add_row({format_number(r.x), format_number(r.lower_bound), format_number(r.upper_envelope)});
  }
  return table.str();
}

std::string scan_csv(const CounterexampleScan& scan) {
  CsvTable table({"delta", "integral"});
  for (const ScanRow& r : scan.rows) table.add_row({format_number(r.delta), format_number(r.integral)});
  return table.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string strip_timestamps(const std::string& json_text) {
  detail::Json j = detail::Json::parse(json_text);
  erase_timestamps(j);
  return j.dump(2);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace singular_sl
