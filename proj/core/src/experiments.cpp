#include "singular_sl/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include "json_convert.hpp"
#include "singular_sl/closed_form_solver.hpp"
#include "singular_sl/errors.hpp"
#include "singular_sl/galerkin_solver.hpp"
#include "singular_sl/report_io.hpp"
#include "singular_sl/special_functions.hpp"
#include "singular_sl/weighted_analysis.hpp"

namespace singular_sl {
namespace {

using detail::Json;

constexpr double kRateFloor = 0.9;
constexpr double kProfileSpread = 3.0;
constexpr double kOriginTolerance = 0.05;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("option '" + key + "': cannot parse '" + text + "'");
}

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string cell(double alpha, const LebesgueExponent& p) { return "alpha=" + g6(alpha) + " p=" + p.to_string(); }

std::string file_stem(const std::string& text) {
  std::string out;
  for (char c : text) out += std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' ? c : '_';
  return out;
}

std::uint64_t require_seed(const RunConfig& config, Suite suite) {
  if (!config.seed) throw ConfigError("suite '" + to_string(suite) + "' samples random data and needs a seed");
  return *config.seed;
}

template <class Pred>
std::vector<double> select_alphas(const RunConfig& config, Pred pred, Suite suite) {
  std::vector<double> out;
  for (double a : config.alphas) {
    if (pred(a)) out.push_back(a);
  }
  if (out.empty()) throw ConfigError("no alpha in the configuration is admissible for suite '" + to_string(suite) + "'");
  return out;
}

struct Exact {
  std::function<double(double)> u;
  std::function<double(double)> du;
};

std::optional<Exact> exact_solution(const std::string& selector, double alpha) {
  if (selector == "manufactured_dirichlet") {
    return Exact{[alpha](double x) { return rhs::manufactured_dirichlet_solution(alpha, x); },
                 [alpha](double x) {
                   return (1.0 - 2.0 * alpha) * std::pow(x, -2.0 * alpha) -
                          (2.0 - 2.0 * alpha) * std::pow(x, 1.0 - 2.0 * alpha);
                 }};
  }
  if (selector == "manufactured_neumann") {
    return Exact{[](double x) { return rhs::manufactured_neumann_solution(x); }, [](double) { return -1.0; }};
  }
  if (selector == "manufactured_cosine") {
    return Exact{[](double x) { return rhs::manufactured_cosine_solution(x); },
                 [](double x) { return -0.5 * M_PI * std::sin(0.5 * M_PI * x); }};
  }
  return std::nullopt;
}

double max_error_on(const std::function<double(double)>& a, const std::function<double(double)>& b, double lo,
                    int points) {
  double worst = 0.0;
  for (int i = 0; i <= points; ++i) {
    const double x = lo * std::pow(1.0 / lo, static_cast<double>(i) / points);
    worst = std::max(worst, std::abs(a(x) - b(x)));
  }
  return worst;
}

// Closed-form solution as (u, u') on all of (0, 1], continued below the sample
// grid by the leading power of each boundary condition.
Exact continued(const Solution& sol) {
  const double lo = sol.sampled().grid.lower();
  const double alpha = sol.problem().alpha().value();
  const double power = sol.problem().bc() == BoundaryKind::Dirichlet ? -2.0 * alpha : 1.0 - 2.0 * alpha;
  return Exact{[&sol, lo](double x) { return sol.value(std::max(x, lo)); },
               [&sol, lo, power](double x) {
                 return x >= lo ? sol.derivative(x) : sol.derivative(lo) * std::pow(x / lo, power);
               }};
}

void add(SuiteResult& r, std::string name, bool pass, std::string detail) {
  r.checks.push_back({std::move(name), pass, std::move(detail)});
}

Json base_document(const RunConfig& config, Suite suite) {
  Json doc;
  doc["suite"] = to_string(suite);
  doc["config"] = Json::parse(config_json(config));
  return doc;
}

void ratio_cells(const RunConfig& config, Suite suite, BoundaryKind bc, const std::vector<double>& alphas,
                 SuiteResult& result, Json& doc) {
  const std::uint64_t seed = require_seed(config, suite);
  CsvTable table({"alpha", "p", "quantity", "max", "median", "bounded", "divergent_flags"});
  doc["ratio_studies"] = Json::array();
  for (double a : alphas) {
    for (const LebesgueExponent& p : config.ps) {
      const RatioStudy st = ratio_study(a, bc, p, config.samples, seed);
      std::string worst;
      double worst_share = 0.0;
      for (const auto& [key, s] : st.summary) {
        table.add_row({format_number(a), p.to_string(), key, format_number(s.max), format_number(s.median),
                       s.bounded ? "true" : "false", std::to_string(st.divergent_flags)});
        const double share = s.median > 0.0 ? s.max / s.median : std::numeric_limits<double>::infinity();
        if (worst.empty() || share > worst_share) {
          worst = key;
          worst_share = share;
        }
      }
      add(result, "ratios " + cell(a, p), st.pass,
          "worst max/median " + g6(worst_share) + " (" + worst + "), divergent flags " +
              std::to_string(st.divergent_flags));
      doc["ratio_studies"].push_back(detail::to_json(st));
    }
  }
  result.tables["ratios"] = table.str();
}

SuiteResult dirichlet_suite(const RunConfig& config) {
  SuiteResult result;
  result.suite = Suite::Dirichlet;
  const auto alphas = select_alphas(config, [](double a) { return a < 0.5; }, Suite::Dirichlet);
  Json doc = base_document(config, Suite::Dirichlet);
  ratio_cells(config, Suite::Dirichlet, BoundaryKind::Dirichlet, alphas, result, doc);

  const std::vector<double> xs = decade_points(1, 6);
  doc["boundary"] = Json::array();
  for (double a : alphas) {
    const AlphaParam param(a);
    const Solution one = solve(BvpProblem(param, rhs::constant(1.0), BoundaryKind::Dirichlet));
    std::vector<double> origin;
    for (double x : xs) origin.push_back(std::abs(std::pow(x, 2.0 * a - 1.0) * one.value(x)));
    bool bounded = true;
    for (double v : origin) bounded = bounded && std::isfinite(v) && v <= 2.0 * origin[0] && v >= 0.5 * origin[0];
    add(result, "origin_bound alpha=" + g6(a), bounded,
        "|x^(2a-1) u| from " + g6(origin.front()) + " to " + g6(origin.back()));

    const Solution singular = solve(BvpProblem(param, rhs::power(0.25), BoundaryKind::Dirichlet, LebesgueExponent(2.0)));
    std::vector<double> decay;
    for (double x : xs) decay.push_back(std::abs(std::pow(x, 2.0 * a - 0.5) * singular.value(x)));
    const double slope = loglog_slope(xs, decay);
    add(result, "origin_decay alpha=" + g6(a), slope >= 0.4, "exponent " + g6(slope) + " (predicted 0.5)");
    doc["boundary"].push_back({{"alpha", a},
                               {"x", xs},
                               {"origin_values", origin},
                               {"decay_values", decay},
                               {"decay_exponent", slope}});
  }
  result.json = doc.dump(2);
  return result;
}

SuiteResult neumann_suite(const RunConfig& config) {
  SuiteResult result;
  result.suite = Suite::Neumann;
  const auto alphas = select_alphas(config, [](double a) { return a < 1.0; }, Suite::Neumann);
  Json doc = base_document(config, Suite::Neumann);
  ratio_cells(config, Suite::Neumann, BoundaryKind::Neumann, alphas, result, doc);
  const std::uint64_t seed = require_seed(config, Suite::Neumann);

  doc["dual_regime"] = Json::array();
  for (double a : alphas) {
    if (a < 0.5) continue;
    const LebesgueExponent p(0.5 * (1.0 + 2.0 / (3.0 - 2.0 * a)));
    const RatioStudy st = ratio_study(a, BoundaryKind::Neumann, p, config.samples, seed);
    const RatioSummary& u = st.summary.at("u_Lp");
    add(result, "dual_regime u_Lp " + cell(a, p), u.all_finite && u.bounded,
        "max " + g6(u.max) + " median " + g6(u.median));
    doc["dual_regime"].push_back(detail::to_json(st));
  }

  doc["embedding"] = Json::array();
  for (double a : alphas) {
    if (a <= 0.5) continue;
    const LebesgueExponent q(2.0 / (2.0 * a - 1.0));
    const Solution sol = solve(BvpProblem(AlphaParam(a), rhs::constant(1.0), BoundaryKind::Neumann));
    const NormValue n = sampled_lp_norm(sol.sampled().grid, sol.sampled().u, q);
    add(result, "embedding alpha=" + g6(a) + " q=" + q.to_string(), std::isfinite(n.value) && !n.divergent,
        "||u||_q = " + g6(n.value) + " for f = 1");
    doc["embedding"].push_back({{"alpha", a}, {"q", q.to_string()}, {"norm", detail::number(n.value)},
                                {"divergent", n.divergent}});
  }

  const std::vector<double> xs = decade_points(3, 6);
  doc["flux_vanishing"] = Json::array();
  for (double a : alphas) {
    for (const std::string sel : {"one", "poly:1,-1,2"}) {
      const Solution sol = solve(BvpProblem(AlphaParam(a), rhs::from_selector(sel, a), BoundaryKind::Neumann));
      for (const LebesgueExponent& p : config.ps) {
        if (p.is_inf()) continue;
        std::vector<double> q;
        for (double x : xs) q.push_back(std::abs(std::pow(x, p.reciprocal() - 1.0) * sol.flux(x)));
        bool decreasing = q.front() >= 2.0 * q.back();
        for (std::size_t i = 1; i < q.size(); ++i) decreasing = decreasing && q[i] < q[i - 1];
        add(result, "flux_vanishing " + cell(a, p) + " rhs=" + sel, decreasing,
            "k=3: " + g6(q.front()) + ", k=6: " + g6(q.back()));
        doc["flux_vanishing"].push_back({{"alpha", a}, {"p", p.to_string()}, {"rhs", sel}, {"x", xs}, {"values", q}});
      }
    }
  }
  result.json = doc.dump(2);
  return result;
}

SuiteResult optimality_suite(const RunConfig& config) {
  SuiteResult result;
  result.suite = Suite::Optimality;
  const std::uint64_t seed = require_seed(config, Suite::Optimality);
  const auto alphas = select_alphas(config, [](double a) { return a < 1.0; }, Suite::Optimality);
  Json doc = base_document(config, Suite::Optimality);
  const std::vector<double> xs = decade_points(1, 5);
  CsvTable table({"profile", "alpha", "p", "x", "lower_bound", "upper_envelope"});
  doc["kd"] = Json::array();
  doc["kn"] = Json::array();
  auto rows = [&table](const std::string& name, const Profile& prof) {
    for (const ProfileRow& r : prof.rows) {
      table.add_row({name, format_number(prof.alpha), prof.p.to_string(), format_number(r.x),
                     format_number(r.lower_bound), format_number(r.upper_envelope)});
    }
  };
  auto at = [](const Profile& prof, double x) {
    for (const ProfileRow& r : prof.rows) {
      if (std::abs(r.x - x) <= 1e-12 * x) return r.lower_bound;
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
  for (double a : alphas) {
    for (const LebesgueExponent& p : config.ps) {
      if (a < 0.5) {
        const Profile kd = kd_profile(a, p, xs, config.samples, seed);
        const double lower = at(kd, 1e-4);
        const double ref = std::abs(kd.reference);
        add(result, "kd_lower " + cell(a, p), std::abs(lower - ref) <= kOriginTolerance * ref,
            "lower " + g6(lower) + " vs origin coefficient " + g6(ref));
        add(result, "kd_envelope " + cell(a, p), kd.envelope_spread() <= kProfileSpread,
            "spread " + g6(kd.envelope_spread()));
        rows("kd", kd);
        doc["kd"].push_back(detail::to_json(kd));
      }
      const Profile kn = kn_profile(a, p, xs, config.samples, seed);
      if (p.is_inf()) {
        // The probe approaches its limit like x^(2-2a); remove that term from the
        // two smallest decades before comparing.
        const double r = std::pow(0.1, 2.0 - 2.0 * a);
        const double lower = (at(kn, 1e-5) - r * at(kn, 1e-4)) / (1.0 - r);
        add(result, "kn_lower " + cell(a, p), std::abs(lower - kn.reference) <= kOriginTolerance * kn.reference,
            "extrapolated lower " + g6(lower) + " vs |A (2-2a) b2| " + g6(kn.reference));
      } else {
        double smallest = std::numeric_limits<double>::infinity();
        for (const ProfileRow& r : kn.rows) {
          if (r.x <= 1e-3) smallest = std::min(smallest, r.lower_bound);
        }
        add(result, "kn_lower " + cell(a, p), smallest >= 0.5, "min lower bound for x <= 1e-3: " + g6(smallest));
      }
      add(result, "kn_envelope " + cell(a, p), kn.envelope_spread() <= kProfileSpread,
          "spread " + g6(kn.envelope_spread()));
      rows("kn", kn);
      doc["kn"].push_back(detail::to_json(kn));
    }
  }
  result.tables["profiles"] = table.str();
  result.json = doc.dump(2);
  return result;
}

SuiteResult counterexample_suite(const RunConfig& config) {
  SuiteResult result;
  result.suite = Suite::Counterexample;
  const auto alphas = select_alphas(config, [](double a) { return a > 0.0 && a < 1.0; }, Suite::Counterexample);
  Json doc = base_document(config, Suite::Counterexample);
  const std::vector<double> deltas = decade_points(2, 8);
  CsvTable table({"alpha", "rhs", "delta", "integral"});
  doc["scans"] = Json::array();
  for (double a : alphas) {
    const CounterexampleScan scan = counterexample_scan(a, deltas);
    const CounterexampleScan smooth = counterexample_scan(a, deltas, rhs::constant(1.0));
    add(result, "f_norm alpha=" + g6(a), std::abs(scan.f_l1 - 2.0) <= 1e-3, "||f||_1 = " + format_number(scan.f_l1));
    add(result, "slope alpha=" + g6(a), scan.slope >= 0.8 && scan.slope <= 1.2,
        "slope " + g6(scan.slope) + " against 2(1-ln d)^(1/2); " + g6(0.5 * scan.slope) +
            " against 4(1-ln d)^(1/2)");
    const double growth = std::abs(smooth.rows.back().integral - smooth.rows[smooth.rows.size() - 3].integral);
    add(result, "smooth_converges alpha=" + g6(a), growth < 1e-3, "I(1e-8) - I(1e-6) = " + g6(growth));
    const Solution sol = solve(BvpProblem(AlphaParam(a), rhs::counterexample(), BoundaryKind::Neumann,
                                          LebesgueExponent(1.0)));
    const NormValue u1 = sampled_lp_norm(sol.sampled().grid, sol.sampled().u, LebesgueExponent(1.0));
    add(result, "u_l1 alpha=" + g6(a), std::isfinite(u1.value) && !u1.divergent, "||u||_1 = " + g6(u1.value));
    for (const CounterexampleScan* s : {&scan, &smooth}) {
      for (const ScanRow& r : s->rows) {
        table.add_row({format_number(a), s->rhs, format_number(r.delta), format_number(r.integral)});
      }
    }
    Json entry = detail::to_json(scan);
    entry["smooth"] = detail::to_json(smooth);
    entry["u_l1"] = detail::number(u1.value);
    doc["scans"].push_back(entry);
  }
  result.tables["scans"] = table.str();
  result.json = doc.dump(2);
  return result;
}

SuiteResult convergence_suite(const RunConfig& config) {
  SuiteResult result;
  result.suite = Suite::Convergence;
  const std::uint64_t seed = require_seed(config, Suite::Convergence);
  const auto alphas = select_alphas(config, [](double a) { return a > -0.5 && a < 1.0; }, Suite::Convergence);
  Json doc = base_document(config, Suite::Convergence);
  const std::vector<int> ns{64, 128, 256};
  CsvTable table({"alpha", "bc", "rhs", "n", "gamma", "energy_error"});
  doc["rates"] = Json::array();
  for (double a : alphas) {
    std::vector<std::pair<BoundaryKind, std::string>> cases;
    if (a < 0.5) cases.emplace_back(BoundaryKind::Dirichlet, "manufactured_dirichlet");
    cases.emplace_back(BoundaryKind::Neumann, "manufactured_cosine");
    for (const auto& [bc, sel] : cases) {
      const BvpProblem problem(AlphaParam(a), rhs::from_selector(sel, a), bc);
      const Exact exact = *exact_solution(sel, a);
      const double gamma = config.gamma > 0.0 ? config.gamma : default_grading(problem.alpha(), bc);
      std::vector<double> errors;
      for (int n : ns) {
        const FemSolution fem = solve_galerkin(problem, n, gamma);
        errors.push_back(energy_error(fem, exact.u, exact.du));
        table.add_row({format_number(a), to_string(bc), sel, std::to_string(n), format_number(gamma),
                       format_number(errors.back())});
      }
      const double rate = std::log2(errors.front() / errors.back()) / 2.0;
      add(result, "rate alpha=" + g6(a) + " bc=" + to_string(bc), rate >= kRateFloor,
          "energy rate " + g6(rate) + " (n=64..256, gamma=" + g6(gamma) + ")");
      doc["rates"].push_back({{"alpha", a}, {"bc", to_string(bc)}, {"rhs", sel}, {"gamma", gamma},
                              {"n", ns}, {"energy_errors", errors}, {"rate", rate}});
    }
    if (a > 0.0) {
      // 1 - x lies in the trial space, so the Galerkin solution must reproduce it.
      const BvpProblem linear(AlphaParam(a), rhs::manufactured_neumann(a), BoundaryKind::Neumann);
      const Exact exact = *exact_solution("manufactured_neumann", a);
      const double err = energy_error(solve_galerkin(linear, ns.front(), config.gamma), exact.u, exact.du);
      add(result, "reproduces_linear alpha=" + g6(a), err <= 1e-6, "energy error " + g6(err) + " for u = 1 - x");
    }
  }

  boost::random::mt19937_64 gen(seed);
  boost::random::uniform_int_distribution<std::size_t> pick(0, alphas.size() - 1);
  boost::random::uniform_int_distribution<int> coin(0, 1);
  const RandomRhsFamily family(LebesgueExponent::inf(), seed);
  doc["cross_engine"] = Json::array();
  constexpr int kTriples = 20;
  for (int i = 0; i < kTriples; ++i) {
    const double a = alphas[pick(gen)];
    const BoundaryKind bc = a < 0.5 && coin(gen) == 0 ? BoundaryKind::Dirichlet : BoundaryKind::Neumann;
    const RhsFunction f = family.draw(static_cast<std::size_t>(i));
    const BvpProblem problem(AlphaParam(a), f, bc);
    const Solution closed = solve(problem);
    const FemSolution fem = solve_galerkin(problem, 256);
    const Exact ref = continued(closed);
    const double diff = max_error_on([&fem](double x) { return fem.value(x); }, ref.u, 0.01, 200);
    const double estimate = interpolation_energy_error(fem, ref.u, ref.du);
    add(result, "cross_engine #" + std::to_string(i) + " alpha=" + g6(a) + " bc=" + to_string(bc),
        diff <= 10.0 * estimate, "max diff " + g6(diff) + " vs 10 x " + g6(estimate));
    doc["cross_engine"].push_back({{"alpha", a}, {"bc", to_string(bc)}, {"rhs", f.name()},
                                   {"max_difference", diff}, {"interpolation_error", estimate}});
  }
  result.tables["rates"] = table.str();
  result.json = doc.dump(2);
  return result;
}

int engine_failure(std::ostream& out, const std::string& where, const std::exception& e) {
  out << "engine failure in " << where << ": " << e.what() << "\n";
  return kExitEngine;
}

}  // namespace

std::string to_string(EngineChoice engine) {
  switch (engine) {
    case EngineChoice::ClosedForm: return "closed_form";
    case EngineChoice::Galerkin: return "galerkin";
    default: return "both";
  }
}

std::string to_string(ReportFormat format) {
  switch (format) {
    case ReportFormat::Csv: return "csv";
    case ReportFormat::Json: return "json";
    default: return "both";
  }
}

std::string to_string(Suite suite) {
  switch (suite) {
    case Suite::Dirichlet: return "dirichlet";
    case Suite::Neumann: return "neumann";
    case Suite::Optimality: return "optimality";
    case Suite::Counterexample: return "counterexample";
    default: return "convergence";
  }
}

Suite parse_suite(const std::string& text) {
  for (Suite s : {Suite::Dirichlet, Suite::Neumann, Suite::Optimality, Suite::Counterexample, Suite::Convergence}) {
    if (lower(text) == to_string(s)) return s;
  }
  throw ConfigError("unknown suite '" + text + "'");
}

RunConfig default_config() {
  RunConfig c;
  c.alphas = {-2.0, -1.0, -0.5, -0.25, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9};
  c.ps = {LebesgueExponent(1.0), LebesgueExponent(2.0), LebesgueExponent::inf()};
  c.rhs = {"one"};
  c.seed = 20240611;
  return c;
}

void set_option(RunConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = lower(trim(raw_key));
  const std::string value = trim(raw_value);
  try {
    if (key == "alpha") {
      c.alphas.clear();
      for (const std::string& s : split(value, ',')) c.alphas.push_back(to_double(key, s));
    } else if (key == "p") {
      c.ps.clear();
      for (const std::string& s : split(value, ',')) c.ps.push_back(LebesgueExponent::parse(s));
    } else if (key == "bc") {
      c.bc = parse_boundary_kind(value);
    } else if (key == "rhs") {
      c.rhs = split(value, ';');
    } else if (key == "engine") {
      const std::string v = lower(value);
      if (v == "closed_form") {
        c.engine = EngineChoice::ClosedForm;
      } else if (v == "galerkin") {
        c.engine = EngineChoice::Galerkin;
      } else if (v == "both") {
        c.engine = EngineChoice::Both;
      } else {
        throw ConfigError("engine must be closed_form, galerkin or both");
      }
    } else if (key == "n") {
      c.mesh_n = static_cast<int>(to_double(key, value));
    } else if (key == "gamma") {
      c.gamma = lower(value) == "auto" ? 0.0 : to_double(key, value);
    } else if (key == "tolerance") {
      c.tolerance = to_double(key, value);
    } else if (key == "samples") {
      c.samples = static_cast<int>(to_double(key, value));
    } else if (key == "seed") {
      if (lower(value) == "none") {
        c.seed.reset();
      } else {
        c.seed = static_cast<std::uint64_t>(std::stoull(value));
      }
    } else if (key == "output") {
      c.output_dir = value;
    } else if (key == "format") {
      const std::string v = lower(value);
      if (v == "csv") {
        c.format = ReportFormat::Csv;
      } else if (v == "json") {
        c.format = ReportFormat::Json;
      } else if (v == "both") {
        c.format = ReportFormat::Both;
      } else {
        throw ConfigError("format must be csv, json or both");
      }
    } else {
      throw ConfigError("unknown option '" + raw_key + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("option '" + raw_key + "': " + e.what());
  }
  if (c.alphas.empty()) throw ConfigError("alpha list is empty");
  if (c.ps.empty()) throw ConfigError("p list is empty");
  if (c.samples < 1) throw ConfigError("samples must be >= 1");
  if (c.mesh_n < 4) throw ConfigError("n must be >= 4");
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      set_option(base, name, node.data());
    } else {
      for (const auto& [key, leaf] : node) set_option(base, key, leaf.data());
    }
  }
  return base;
}

std::string config_json(const RunConfig& c) {
  Json j;
  j["alpha"] = c.alphas;
  j["p"] = Json::array();
  for (const LebesgueExponent& p : c.ps) j["p"].push_back(p.to_string());
  j["bc"] = to_string(c.bc);
  j["rhs"] = c.rhs;
  j["engine"] = to_string(c.engine);
  j["n"] = c.mesh_n;
  j["gamma"] = c.gamma > 0.0 ? Json(c.gamma) : Json("auto");
  j["tolerance"] = c.tolerance;
  j["samples"] = c.samples;
  j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  j["output"] = c.output_dir.string();
  j["format"] = to_string(c.format);
  return j.dump(2);
}

bool SuiteResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

SuiteResult run_suite(const RunConfig& config, Suite suite) {
  switch (suite) {
    case Suite::Dirichlet: return dirichlet_suite(config);
    case Suite::Neumann: return neumann_suite(config);
    case Suite::Optimality: return optimality_suite(config);
    case Suite::Counterexample: return counterexample_suite(config);
    default: return convergence_suite(config);
  }
}

int cmd_bessel(double order, const std::vector<double>& ys, std::ostream& out) {
  try {
    const special::BesselOrder nu(order);
    for (double y : ys) {
      if (!std::isfinite(y) || y < 0.0) throw DomainError("bessel: y must be finite and >= 0");
    }
    CsvTable table({"nu", "y", "I", "K", "I_prime", "K_prime"});
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double y : ys) {
      const double i_val = special::bessel_i(nu, y).value;
      double k_val = nan, i_prime = nan, k_prime = nan;
      if (y > 0.0) {
        i_prime = special::bessel_i_prime(nu, y);
      } else {
        i_prime = nu.nu() == 0.0 || nu.nu() > 1.0 ? 0.0 : nu.nu() == 1.0 ? 0.5 : inf;
      }
      if (nu.is_integer()) {
        if (y > 0.0) {
          k_val = special::bessel_k_int(nu.as_integer(), y).value;
          k_prime = special::bessel_k_prime(nu.as_integer(), y);
        } else {
          k_val = inf;
          k_prime = -inf;
        }
      }
      table.add_row({format_number(nu.nu()), format_number(y), format_number(i_val), format_number(k_val),
                     format_number(i_prime), format_number(k_prime)});
    }
    out << table.str();
    return kExitOk;
  } catch (const DomainError& e) {
    out << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ConvergenceError& e) {
    out << "series failure: " << e.what() << "\n";
    return kExitEngine;
  }
}

int cmd_solve(const RunConfig& config, std::ostream& out) {
  const bool closed = config.engine != EngineChoice::Galerkin;
  const bool galerkin = config.engine != EngineChoice::ClosedForm;
  for (double a : config.alphas) {
    if (config.bc == BoundaryKind::Dirichlet && a >= 0.5) {
      out << "config rejected: Dirichlet data requires alpha < 1/2 (got " << g6(a) << ")\n";
      return kExitDomain;
    }
    if (galerkin && a <= -0.5) {
      out << "config rejected: the Galerkin engine requires alpha > -1/2 (got " << g6(a) << ")\n";
      return kExitDomain;
    }
  }
  bool ok = true;
  for (double a : config.alphas) {
    for (const LebesgueExponent& p : config.ps) {
      for (const std::string& sel : config.rhs) {
        const std::string where = cell(a, p) + " rhs=" + sel;
        std::optional<BvpProblem> problem;
        try {
          problem.emplace(AlphaParam(a), rhs::from_selector(sel, a), config.bc, p);
        } catch (const DomainError& e) {
          out << "config rejected (" << where << "): " << e.what() << "\n";
          return kExitDomain;
        }
        const std::optional<Exact> exact = exact_solution(sel, a);
        const std::string stem = "a" + g6(a) + "_p" + p.to_string() + "_" + file_stem(sel);
        auto emit = [&config](const SolutionTable& t, const std::string& name) {
          if (config.format != ReportFormat::Json) write_text(config.output_dir / (name + ".csv"), solution_csv(t));
          if (config.format != ReportFormat::Csv) write_text(config.output_dir / (name + ".json"), solution_json(t));
        };
        if (closed) {
          try {
            const Solution sol = solve(*problem);
            const double residual = sol.residual_max();
            std::string line = "closed_form " + where + " residual_max=" + g6(residual);
            bool cell_ok = residual <= config.tolerance;
            if (exact) {
              const double err = max_error_on([&sol](double x) { return sol.value(x); }, exact->u, 1e-4, 400);
              line += " max_error=" + g6(err);
              cell_ok = cell_ok && err <= config.tolerance;
            }
            out << line << (cell_ok ? "" : "  [above tolerance]") << "\n";
            ok = ok && cell_ok;
            emit(tabulate(sol), "solution_closed_form_" + stem);
          } catch (const DomainError& e) {
            out << "config rejected (" << where << "): " << e.what() << "\n";
            return kExitDomain;
          } catch (const std::exception& e) {
            return engine_failure(out, "closed_form " + where, e);
          }
        }
        if (galerkin) {
          try {
            const FemSolution fem = solve_galerkin(*problem, config.mesh_n, config.gamma);
            std::string line = "galerkin " + where + " n=" + std::to_string(config.mesh_n) +
                               " gamma=" + g6(fem.mesh.gamma) + " energy_norm=" + g6(energy_norm(fem));
            if (exact) line += " energy_error=" + g6(energy_error(fem, exact->u, exact->du));
            out << line << "\n";
            emit(tabulate(fem, *problem), "solution_galerkin_" + stem);
          } catch (const DomainError& e) {
            out << "config rejected (" << where << "): " << e.what() << "\n";
            return kExitDomain;
          } catch (const std::exception& e) {
            return engine_failure(out, "galerkin " + where, e);
          }
        }
      }
    }
  }
  return ok ? kExitOk : kExitAssertion;
}

int cmd_verify(const RunConfig& config, Suite suite, std::ostream& out) {
  SuiteResult result;
  try {
    result = run_suite(config, suite);
  } catch (const ConfigError& e) {
    out << "config rejected: " << e.what() << "\n";
    return kExitDomain;
  } catch (const DomainError& e) {
    out << "config rejected: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    return engine_failure(out, "suite " + to_string(suite), e);
  }
  const std::string stem = "verify_" + to_string(suite);
  if (config.format != ReportFormat::Csv) {
    Json doc = Json::parse(result.json);
    doc["timestamp"] = utc_timestamp();
    doc["pass"] = result.pass();
    doc["checks"] = Json::array();
    for (const Check& c : result.checks) doc["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    write_text(config.output_dir / (stem + ".json"), doc.dump(2) + "\n");
  }
  if (config.format != ReportFormat::Json) {
    CsvTable checks({"check", "pass", "detail"});
    for (const Check& c : result.checks) checks.add_row({c.name, c.pass ? "true" : "false", c.detail});
    write_text(config.output_dir / (stem + "_checks.csv"), checks.str());
    for (const auto& [name, text] : result.tables) write_text(config.output_dir / (stem + "_" + name + ".csv"), text);
  }
  std::size_t failed = 0;
  for (const Check& c : result.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    if (!c.pass) ++failed;
  }
  out << to_string(suite) << ": " << (result.checks.size() - failed) << "/" << result.checks.size() << " checks passed\n";
  return failed == 0 ? kExitOk : kExitAssertion;
}

}  // namespace singular_sl
