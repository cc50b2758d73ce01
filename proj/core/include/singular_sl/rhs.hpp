#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace singular_sl {

/// Exponent p >= 1 of L^p, or the distinguished value infinity.
class LebesgueExponent {
 public:
  /// Throws DomainError for p < 1 or NaN. Passing +inf gives the INF exponent.
  explicit LebesgueExponent(double p);
  static LebesgueExponent inf();
  /// Parses "1", "2.5", "inf" (case-insensitive).
  static LebesgueExponent parse(const std::string& text);

  bool is_inf() const { return inf_; }
  /// Finite value; throws DomainError on INF.
  double value() const;
  /// 1/p, with 0 for INF.
  double reciprocal() const { return inf_ ? 0.0 : 1.0 / p_; }
  std::string to_string() const;

  friend bool operator==(const LebesgueExponent& a, const LebesgueExponent& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.p_ == b.p_);
  }

 private:
  double p_ = 1.0;
  bool inf_ = false;
};

enum class RhsKind { NamedAnalytic, Tabulated };

/// A right-hand side f on (0, 1] together with the structural facts the
/// solvers need near the origin.
class RhsFunction {
 public:
  using Fn = std::function<double(double)>;

  struct Definition {
    std::string name;
    RhsKind kind = RhsKind::NamedAnalytic;
    Fn eval;
    /// x -> int_0^x f, when known in closed form.
    Fn primitive;
    /// f = O(x^-blowup) as x -> 0; 0 for bounded f.
    double blowup = 0.0;
    /// f behaves like x^-1 times a power of log (the counterexample).
    bool log_singular = false;
    /// Points in (0, 1) where f or a derivative jumps.
    std::vector<double> breakpoints;
    /// Largest exponent for which f is declared to be in L^p.
    LebesgueExponent integrability = LebesgueExponent::inf();
    bool identically_zero = false;
  };

  explicit RhsFunction(Definition def);

  /// Throws DomainError outside (0, 1] (tabulated: below the first node).
  double operator()(double x) const;

  const std::string& name() const { return def_.name; }
  RhsKind kind() const { return def_.kind; }
  const LebesgueExponent& integrability_class() const { return def_.integrability; }
  double blowup_exponent() const { return def_.blowup; }
  bool log_singular() const { return def_.log_singular; }
  const std::vector<double>& breakpoints() const { return def_.breakpoints; }
  bool is_zero() const { return def_.identically_zero; }
  bool has_primitive() const { return static_cast<bool>(def_.primitive); }
  /// int_0^x f; throws std::logic_error without a primitive.
  double primitive(double x) const;
  /// Whether f is continuous at x (false at breakpoints).
  bool continuous_at(double x) const;
  /// Whether f is in L^p according to its declared class.
  bool in_lp(const LebesgueExponent& p) const;

  RhsFunction scaled(double factor) const;
  RhsFunction renamed(std::string name) const;

 private:
  Definition def_;
};

/// c1 f1 + c2 f2 + ...; the class is the weakest of the terms.
RhsFunction linear_combination(const std::vector<std::pair<double, RhsFunction>>& terms);

namespace rhs {

RhsFunction zero();
RhsFunction constant(double c);
/// sum_k coeffs[k] x^k.
RhsFunction polynomial(std::vector<double> coeffs);
/// x^-beta with 0 <= beta < 1; the declared class is the largest of {inf, 2, 1}
/// with beta p < 1.
RhsFunction power(double beta);
/// c x^-beta (1-x)^m.
RhsFunction power_weight(double c, double beta, int m);
/// Smooth bump of the given height supported in [a, b] with 0 < a < b <= 1.
RhsFunction bump(double a, double b, double height = 1.0);
/// (x (1 - ln x)^(3/2))^-1: in L^1 with norm 2, in no L^p with p > 1.
RhsFunction counterexample();
/// x0^(-1/p) on (0, x0], 0 after; unit L^p norm.
RhsFunction extremal_step(double x0, const LebesgueExponent& p);
/// Right-hand side of u = x^(1-2a) - x^(2-2a) (weighted Dirichlet data).
RhsFunction manufactured_dirichlet(double alpha);
/// Right-hand side of u = 1 - x (weighted Neumann data for alpha > 0).
RhsFunction manufactured_neumann(double alpha);
/// Right-hand side of u = cos(pi x / 2) (weighted Neumann data for alpha > -1/2).
RhsFunction manufactured_cosine(double alpha);
/// Piecewise-linear interpolant of (xs, ys); xs strictly increasing, last node 1.
RhsFunction tabulated(std::vector<double> xs, std::vector<double> ys);

/// Exact solutions matching the manufactured right-hand sides.
double manufactured_dirichlet_solution(double alpha, double x);
double manufactured_neumann_solution(double x);
double manufactured_cosine_solution(double x);

/// Builds a registry entry from a selector such as "one", "zero", "x",
/// "const:2", "poly:1,0,3", "power:0.25", "bump:0.2,0.6", "counterexample",
/// "step:0.01,2", "manufactured_dirichlet", "manufactured_neumann",
/// "manufactured_cosine". Alpha is needed by the manufactured entries.
/// Throws DomainError on an unknown selector.
RhsFunction from_selector(const std::string& selector, double alpha);

/// Reads a two-column CSV (x,f) file into a tabulated rhs.
RhsFunction load_table(const std::string& path);

}  // namespace rhs

/// int_0^eps h from the local power law of h at eps and eps/2; used to close
/// dyadic partitions at the origin.
double power_law_tail(const std::function<double(double)>& h, double eps);

}  // namespace singular_sl
