#include "singular_sl/rhs.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "singular_sl/errors.hpp"

namespace singular_sl {

LebesgueExponent::LebesgueExponent(double p) {
  if (std::isnan(p) || p < 1.0) {
    throw DomainError("LebesgueExponent: p must be >= 1");
  }
  if (std::isinf(p)) {
    inf_ = true;
    p_ = std::numeric_limits<double>::infinity();
  } else {
    p_ = p;
  }
}

LebesgueExponent LebesgueExponent::inf() {
  return LebesgueExponent(std::numeric_limits<double>::infinity());
}

LebesgueExponent LebesgueExponent::parse(const std::string& text) {
  std::string lower;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) {
      lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  if (lower == "inf" || lower == "infinity" || lower == "oo") return inf();
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(lower, &used);
  } catch (const std::exception&) {
    throw DomainError("LebesgueExponent: cannot parse '" + text + "'");
  }
  if (used != lower.size()) {
    throw DomainError("LebesgueExponent: cannot parse '" + text + "'");
  }
  return LebesgueExponent(p);
}

double LebesgueExponent::value() const {
  if (inf_) throw DomainError("LebesgueExponent: INF has no finite value");
  return p_;
}

std::string LebesgueExponent::to_string() const {
  if (inf_) return "inf";
  std::ostringstream os;
  os << p_;
  return os.str();
}

RhsFunction::RhsFunction(Definition def) : def_(std::move(def)) {
  if (!def_.eval) {
    throw std::invalid_argument("RhsFunction: missing evaluator");
  }
  std::sort(def_.breakpoints.begin(), def_.breakpoints.end());
}

double RhsFunction::operator()(double x) const {
  if (!(x > 0.0) || x > 1.0) {
    throw DomainError("RhsFunction '" + def_.name + "': x must lie in (0, 1]");
  }
  return def_.eval(x);
}

double RhsFunction::primitive(double x) const {
  if (!def_.primitive) {
    throw std::logic_error("RhsFunction '" + def_.name + "' has no closed-form primitive");
  }
  return def_.primitive(x);
}

bool RhsFunction::continuous_at(double x) const {
  for (double b : def_.breakpoints) {
    if (std::abs(x - b) <= 1e-12 * std::max(1.0, b)) return false;
  }
  return true;
}

bool RhsFunction::in_lp(const LebesgueExponent& p) const {
  if (def_.integrability.is_inf()) return true;
  if (p.is_inf()) return false;
  return p.value() <= def_.integrability.value();
}

RhsFunction RhsFunction::scaled(double factor) const {
  Definition def = def_;
  def.name = def_.name + "*" + std::to_string(factor);
  const Fn eval = def_.eval;
  def.eval = [eval, factor](double x) { return factor * eval(x); };
  if (def_.primitive) {
    const Fn prim = def_.primitive;
    def.primitive = [prim, factor](double x) { return factor * prim(x); };
  }
  def.identically_zero = def_.identically_zero || factor == 0.0;
  return RhsFunction(std::move(def));
}

RhsFunction RhsFunction::renamed(std::string name) const {
  Definition def = def_;
  def.name = std::move(name);
  return RhsFunction(std::move(def));
}

RhsFunction linear_combination(const std::vector<std::pair<double, RhsFunction>>& terms) {
  RhsFunction::Definition def;
  def.name = "combination";
  def.identically_zero = true;
  bool all_primitive = true;
  for (const auto& [c, f] : terms) {
    def.blowup = std::max(def.blowup, f.blowup_exponent());
    def.log_singular = def.log_singular || f.log_singular();
    def.breakpoints.insert(def.breakpoints.end(), f.breakpoints().begin(), f.breakpoints().end());
    if (!f.in_lp(def.integrability)) def.integrability = f.integrability_class();
    def.identically_zero = def.identically_zero && (c == 0.0 || f.is_zero());
    all_primitive = all_primitive && f.has_primitive();
  }
  std::sort(def.breakpoints.begin(), def.breakpoints.end());
  def.breakpoints.erase(std::unique(def.breakpoints.begin(), def.breakpoints.end()),
                        def.breakpoints.end());
  def.eval = [terms](double x) {
    double s = 0.0;
    for (const auto& [c, f] : terms) s += c * f(x);
    return s;
  };
  if (all_primitive) {
    def.primitive = [terms](double x) {
      double s = 0.0;
      for (const auto& [c, f] : terms) s += c * f.primitive(x);
      return s;
    };
  }
  return RhsFunction(std::move(def));
}

double power_law_tail(const std::function<double(double)>& h, double eps) {
  const double h1 = h(eps);
  if (h1 == 0.0 || !std::isfinite(h1)) return h1 == 0.0 ? 0.0 : h1;
  const double h2 = h(0.5 * eps);
  double exponent = 0.0;
  if (h2 != 0.0 && (h1 > 0.0) == (h2 > 0.0)) {
    exponent = std::log2(h1 / h2);
  }
  exponent = std::max(exponent, -0.999);
  return eps * h1 / (1.0 + exponent);
}

namespace rhs {
namespace {

LebesgueExponent class_for_blowup(double beta) {
  if (beta <= 0.0) return LebesgueExponent::inf();
  if (2.0 * beta < 1.0) return LebesgueExponent(2.0);
  return LebesgueExponent(1.0);
}

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw DomainError("rhs selector: bad number '" + item + "'");
    }
  }
  return out;
}

}  // namespace

RhsFunction zero() {
  RhsFunction::Definition def;
  def.name = "zero";
  def.eval = [](double) { return 0.0; };
  def.primitive = [](double) { return 0.0; };
  def.identically_zero = true;
  return RhsFunction(std::move(def));
}

RhsFunction constant(double c) {
  RhsFunction::Definition def;
  def.name = c == 1.0 ? "one" : "const:" + std::to_string(c);
  def.eval = [c](double) { return c; };
  def.primitive = [c](double x) { return c * x; };
  def.identically_zero = c == 0.0;
  return RhsFunction(std::move(def));
}

RhsFunction polynomial(std::vector<double> coeffs) {
  RhsFunction::Definition def;
  def.name = "poly";
  def.identically_zero = std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c == 0.0; });
  def.eval = [coeffs](double x) {
    double s = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) s = s * x + *it;
    return s;
  };
  def.primitive = [coeffs](double x) {
    double s = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) s = s * x + coeffs[k] / (k + 1.0);
    return s * x;
  };
  return RhsFunction(std::move(def));
}

RhsFunction power(double beta) {
  if (!(beta >= 0.0) || !(beta < 1.0)) {
    throw DomainError("rhs::power: beta must lie in [0, 1)");
  }
  RhsFunction::Definition def;
  def.name = "power:" + std::to_string(beta);
  def.eval = [beta](double x) { return std::pow(x, -beta); };
  def.primitive = [beta](double x) { return std::pow(x, 1.0 - beta) / (1.0 - beta); };
  def.blowup = beta;
  def.integrability = class_for_blowup(beta);
  return RhsFunction(std::move(def));
}

RhsFunction power_weight(double c, double beta, int m) {
  if (!(beta >= 0.0) || !(beta < 1.0) || m < 0) {
    throw DomainError("rhs::power_weight: need 0 <= beta < 1 and m >= 0");
  }
  RhsFunction::Definition def;
  def.name = "power_weight";
  def.eval = [c, beta, m](double x) { return c * std::pow(x, -beta) * std::pow(1.0 - x, m); };
  def.blowup = beta;
  def.integrability = class_for_blowup(beta);
  def.identically_zero = c == 0.0;
  return RhsFunction(std::move(def));
}

RhsFunction bump(double a, double b, double height) {
  if (!(a > 0.0) || !(b > a) || b > 1.0) {
    throw DomainError("rhs::bump: need 0 < a < b <= 1");
  }
  RhsFunction::Definition def;
  def.name = "bump:" + std::to_string(a) + "," + std::to_string(b);
  def.eval = [a, b, height](double x) {
    const double t = (2.0 * x - a - b) / (b - a);
    if (std::abs(t) >= 1.0) return 0.0;
    return height * std::exp(1.0 - 1.0 / (1.0 - t * t));
  };
  def.breakpoints = {a, b};
  def.identically_zero = height == 0.0;
  return RhsFunction(std::move(def));
}

RhsFunction counterexample() {
  RhsFunction::Definition def;
  def.name = "counterexample";
  def.eval = [](double x) { return 1.0 / (x * std::pow(1.0 - std::log(x), 1.5)); };
  def.primitive = [](double x) { return 2.0 / std::sqrt(1.0 - std::log(x)); };
  def.blowup = 1.0;
  def.log_singular = true;
  def.integrability = LebesgueExponent(1.0);
  return RhsFunction(std::move(def));
}

RhsFunction extremal_step(double x0, const LebesgueExponent& p) {
  if (!(x0 > 0.0) || !(x0 < 1.0)) {
    throw DomainError("rhs::extremal_step: breakpoint must lie in (0, 1)");
  }
  const double height = std::pow(x0, -p.reciprocal());
  RhsFunction::Definition def;
  def.name = "step:" + std::to_string(x0) + "," + p.to_string();
  def.eval = [x0, height](double x) { return x <= x0 ? height : 0.0; };
  def.primitive = [x0, height](double x) { return height * std::min(x, x0); };
  def.breakpoints = {x0};
  return RhsFunction(std::move(def));
}

double manufactured_dirichlet_solution(double alpha, double x) {
  return std::pow(x, 1.0 - 2.0 * alpha) - std::pow(x, 2.0 - 2.0 * alpha);
}

double manufactured_neumann_solution(double x) { return 1.0 - x; }

double manufactured_cosine_solution(double x) { return std::cos(0.5 * std::numbers::pi * x); }

RhsFunction manufactured_dirichlet(double alpha) {
  if (!(alpha < 0.5)) {
    throw DomainError("rhs::manufactured_dirichlet: requires alpha < 1/2");
  }
  RhsFunction::Definition def;
  def.name = "manufactured_dirichlet";
  def.eval = [alpha](double x) {
    return (2.0 - 2.0 * alpha) + std::pow(x, 1.0 - 2.0 * alpha) - std::pow(x, 2.0 - 2.0 * alpha);
  };
  def.primitive = [alpha](double x) {
    return (2.0 - 2.0 * alpha) * x + std::pow(x, 2.0 - 2.0 * alpha) / (2.0 - 2.0 * alpha) -
           std::pow(x, 3.0 - 2.0 * alpha) / (3.0 - 2.0 * alpha);
  };
  return RhsFunction(std::move(def));
}

RhsFunction manufactured_neumann(double alpha) {
  if (!(alpha < 1.0)) {
    throw DomainError("rhs::manufactured_neumann: requires alpha < 1");
  }
  RhsFunction::Definition def;
  def.name = "manufactured_neumann";
  def.eval = [alpha](double x) { return 2.0 * alpha * std::pow(x, 2.0 * alpha - 1.0) + 1.0 - x; };
  def.primitive = [alpha](double x) { return std::pow(x, 2.0 * alpha) + x - 0.5 * x * x; };
  def.blowup = alpha < 0.5 && alpha != 0.0 ? 1.0 - 2.0 * alpha : 0.0;
  def.integrability = class_for_blowup(def.blowup);
  return RhsFunction(std::move(def));
}

RhsFunction manufactured_cosine(double alpha) {
  if (!(alpha > -0.5) || !(alpha < 1.0)) {
    throw DomainError("rhs::manufactured_cosine: requires -1/2 < alpha < 1");
  }
  RhsFunction::Definition def;
  def.name = "manufactured_cosine";
  def.eval = [alpha](double x) {
    const double k = 0.5 * std::numbers::pi;
    return k * 2.0 * alpha * std::pow(x, 2.0 * alpha - 1.0) * std::sin(k * x) +
           k * k * std::pow(x, 2.0 * alpha) * std::cos(k * x) + std::cos(k * x);
  };
  def.blowup = std::max(0.0, -2.0 * alpha);
  def.integrability = class_for_blowup(def.blowup);
  return RhsFunction(std::move(def));
}

RhsFunction tabulated(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() < 2 || xs.size() != ys.size()) {
    throw DomainError("rhs::tabulated: need at least two (x, f) pairs");
  }
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!(xs[i + 1] > xs[i])) throw DomainError("rhs::tabulated: nodes must increase");
  }
  if (xs.front() < 0.0 || std::abs(xs.back() - 1.0) > 1e-12) {
    throw DomainError("rhs::tabulated: nodes must lie in [0, 1] and end at 1");
  }
  RhsFunction::Definition def;
  def.name = "table";
  def.kind = RhsKind::Tabulated;
  const double first = xs.front();
  def.eval = [xs, ys, first](double x) {
    if (x < first) {
      throw DomainError("tabulated rhs: evaluation below the first node");
    }
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.end()) return ys.back();
    const std::size_t j = static_cast<std::size_t>(it - xs.begin());
    const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return (1.0 - t) * ys[j - 1] + t * ys[j];
  };
  if (first == 0.0) {
    std::vector<double> cumulative(xs.size(), 0.0);
    for (std::size_t i = 1; i < xs.size(); ++i) {
      cumulative[i] = cumulative[i - 1] + 0.5 * (ys[i] + ys[i - 1]) * (xs[i] - xs[i - 1]);
    }
    def.primitive = [xs, ys, cumulative](double x) {
      auto it = std::upper_bound(xs.begin(), xs.end(), x);
      if (it == xs.end()) return cumulative.back();
      const std::size_t j = static_cast<std::size_t>(it - xs.begin());
      const double h = x - xs[j - 1];
      const double slope = (ys[j] - ys[j - 1]) / (xs[j] - xs[j - 1]);
      return cumulative[j - 1] + h * (ys[j - 1] + 0.5 * slope * h);
    };
  }
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) def.breakpoints.push_back(xs[i]);
  def.identically_zero = std::all_of(ys.begin(), ys.end(), [](double y) { return y == 0.0; });
  return RhsFunction(std::move(def));
}

RhsFunction from_selector(const std::string& selector, double alpha) {
  const auto colon = selector.find(':');
  const std::string head = selector.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : selector.substr(colon + 1);
  const std::vector<double> nums = args.empty() ? std::vector<double>{} : parse_numbers(args);
  auto need = [&](std::size_t count) {
    if (nums.size() != count) {
      throw DomainError("rhs selector '" + selector + "': expected " + std::to_string(count) +
                        " argument(s)");
    }
  };

  if (head == "zero") return zero();
  if (head == "one") return constant(1.0);
  if (head == "x") return polynomial({0.0, 1.0});
  if (head == "const") {
    need(1);
    return constant(nums[0]);
  }
  if (head == "poly") {
    if (nums.empty()) throw DomainError("rhs selector 'poly' needs coefficients");
    return polynomial(nums);
  }
  if (head == "power") {
    need(1);
    return power(nums[0]);
  }
  if (head == "bump") {
    if (nums.size() == 2) return bump(nums[0], nums[1]);
    need(3);
    return bump(nums[0], nums[1], nums[2]);
  }
  if (head == "counterexample") return counterexample();
  if (head == "step") {
    need(2);
    return extremal_step(nums[0], LebesgueExponent(nums[1]));
  }
  if (head == "manufactured_dirichlet") return manufactured_dirichlet(alpha);
  if (head == "manufactured_neumann") return manufactured_neumann(alpha);
  if (head == "manufactured_cosine") return manufactured_cosine(alpha);
  if (head == "table") return load_table(args);
  throw DomainError("unknown rhs selector '" + selector + "'");
}

RhsFunction load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("rhs table: cannot open '" + path + "'");
  std::vector<double> xs;
  std::vector<double> ys;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x = 0.0;
    double y = 0.0;
    if (!(row >> x >> y)) continue;  // header
    xs.push_back(x);
    ys.push_back(y);
  }
  return tabulated(std::move(xs), std::move(ys));
}

}  // namespace rhs
}  // namespace singular_sl
