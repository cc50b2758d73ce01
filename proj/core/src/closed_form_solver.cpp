#include "singular_sl/closed_form_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "singular_sl/errors.hpp"
#include "singular_sl/quadrature.hpp"

namespace singular_sl {
namespace {

constexpr double kMatchingFloor = 1e-12;

// int_0^eps f phi for a companion phi that tends to a nonzero constant at 0
// (the primitive of f carries any logarithmic behaviour) or, otherwise, from
// the local power law of the product.
double origin_tail(const RhsFunction& f, const std::function<double(double)>& phi, bool phi_bounded,
                   double eps) {
  if (f.is_zero()) return 0.0;
  if (phi_bounded && f.has_primitive()) return phi(eps) * f.primitive(eps);
  return power_law_tail([&](double t) { return f(t) * phi(t); }, eps);
}

int auto_depth(double alpha) {
  const double levels = std::ceil(40.0 / (2.0 - 2.0 * alpha));
  return static_cast<int>(std::clamp(levels, 60.0, 240.0));
}

struct BoundaryRow {
  double plus;
  double minus;
  double particular;
};

}  // namespace

BvpProblem::BvpProblem(AlphaParam alpha, RhsFunction f, BoundaryKind bc, LebesgueExponent p)
    : alpha_(alpha), f_(std::move(f)), bc_(bc), p_(p) {
  if (bc_ == BoundaryKind::Dirichlet && !(alpha_.value() < 0.5)) {
    throw DomainError("BvpProblem: the weighted Dirichlet condition requires alpha < 1/2");
  }
}

ParticularValue particular_solution(const FundamentalPair& pair, const RhsFunction& f, double x) {
  if (!(x > 0.0) || x > 1.0) {
    throw DomainError("particular_solution: x must lie in (0, 1]");
  }
  if (f.is_zero()) return {};
  const quad::Tolerance tol{1e-10, 1e-10, 40};
  const auto plus = [&](double t) { return pair.phi_plus(t); };
  const auto minus = [&](double t) { return pair.phi_minus(t); };
  const auto tail_plus = [&](double eps) { return origin_tail(f, plus, false, eps); };
  const auto tail_minus = [&](double eps) { return origin_tail(f, minus, true, eps); };
  const double int_plus =
      quad::integrate_dyadic([&](double t) { return f(t) * plus(t); }, 0.0, x, tol, 60, tail_plus).value;
  const double int_minus =
      quad::integrate_dyadic([&](double t) { return f(t) * minus(t); }, 0.0, x, tol, 60, tail_minus).value;
  const PairSample s = pair.sample(x);
  const double w0 = pair.wronskian();
  const double x2a = std::pow(x, -2.0 * pair.alpha().value());
  ParticularValue out;
  out.value = (s.minus * int_plus - s.plus * int_minus) / w0;
  out.derivative = (s.flux_minus * int_plus - s.flux_plus * int_minus) / w0 * x2a;
  return out;
}

struct Solution::Impl {
  Impl(BvpProblem prob, FundamentalPair fp) : problem(std::move(prob)), pair(std::move(fp)) {}

  BvpProblem problem;
  FundamentalPair pair;
  SampleGrid grid;
  double A = 0.0;
  double B = 0.0;
  double w0 = 1.0;
  // minus(x) = int_0^x f phi_minus for both conditions; plus(x) = int_0^x f phi_plus
  // (Dirichlet) or -int_x^1 f phi_plus (Neumann). Offsets are panel-edge running
  // totals from the lower edge, or from x = 1 for the Neumann plus integral.
  std::vector<double> minus_offsets;
  std::vector<double> plus_offsets;
  double minus_tail = 0.0;
  double plus_tail_lower = 0.0;
  double plus_right_lower = 0.0;

  struct Point {
    PairSample s;
    double minus;
    double plus;
  };

  // phi_minus = b1 + O(x^(2-2 alpha)); the correction is integrated separately
  // because it decays slowly when alpha is close to 1.
  double tail_minus(double eps) const {
    const RhsFunction& f = problem.f();
    if (f.is_zero()) return 0.0;
    const double b1 = pair.b1();
    const double lead = f.has_primitive()
                            ? b1 * f.primitive(eps)
                            : power_law_tail([&](double t) { return b1 * f(t); }, eps);
    return lead + power_law_tail([&](double t) { return f(t) * (pair.phi_minus(t) - b1); }, eps);
  }
  double tail_plus(double eps) const {
    return origin_tail(problem.f(), [this](double t) { return pair.phi_plus(t); }, false, eps);
  }

  Point evaluate(double x) const {
    if (!(x > 0.0) || x > 1.0) {
      throw DomainError("Solution: x must lie in (0, 1]");
    }
    Point pt{pair.sample(x), 0.0, 0.0};
    const RhsFunction& f = problem.f();
    if (f.is_zero()) return pt;
    const bool dirichlet = problem.bc() == BoundaryKind::Dirichlet;
    if (x < grid.lower()) {
      pt.minus = tail_minus(x);
      pt.plus = dirichlet ? tail_plus(x) : -(plus_right_lower + plus_tail_lower - tail_plus(x));
      return pt;
    }
    const std::size_t idx = grid.locate(x);
    const Panel& panel = grid.panels()[idx];
    // minus integral over [a, x]; plus integral over [a, x] (Dirichlet) or [x, b] (Neumann)
    const double add_minus = panel_integral(panel.a, x, true);
    pt.minus = minus_tail + minus_offsets[idx] + add_minus;
    if (dirichlet) {
      pt.plus = plus_tail_lower + plus_offsets[idx] + panel_integral(panel.a, x, false);
    } else {
      pt.plus = -(plus_offsets[idx] + panel_integral(x, panel.b, false));
    }
    return pt;
  }

  double panel_integral(double a, double b, bool minus) const {
    if (!(b > a)) return 0.0;
    const quad::GaussRule& rule = quad::gauss_legendre(grid.order());
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double acc = 0.0;
    for (int k = 0; k < rule.size(); ++k) {
      const double t = mid + half * rule.nodes[static_cast<std::size_t>(k)];
      const PairSample s = pair.sample(t);
      acc += rule.weights[static_cast<std::size_t>(k)] * problem.f()(t) * (minus ? s.minus : s.plus);
    }
    return half * acc;
  }

  double value(const Point& pt) const {
    return A * pt.s.plus + B * pt.s.minus + (pt.s.minus * pt.plus - pt.s.plus * pt.minus) / w0;
  }
  double flux(const Point& pt) const {
    return A * pt.s.flux_plus + B * pt.s.flux_minus +
           (pt.s.flux_minus * pt.plus - pt.s.flux_plus * pt.minus) / w0;
  }
};

Solution::Solution(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

const BvpProblem& Solution::problem() const { return impl_->problem; }
const FundamentalPair& Solution::pair() const { return impl_->pair; }
double Solution::A() const { return impl_->A; }
double Solution::B() const { return impl_->B; }

double Solution::value(double x) const { return impl_->value(impl_->evaluate(x)); }

double Solution::flux(double x) const { return impl_->flux(impl_->evaluate(x)); }

double Solution::derivative(double x) const {
  return flux(x) * std::pow(x, -2.0 * impl_->problem.alpha().value());
}

double Solution::residual_max() const {
  const RhsFunction& f = impl_->problem.f();
  constexpr int kPoints = 64;
  double worst = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double x = std::pow(10.0, -6.0 + 6.0 * i / (kPoints - 1.0)) * 0.95;
    const double h = 1e-2 * x;
    bool skip = false;
    for (double bp : f.breakpoints()) skip = skip || std::abs(bp - x) < 3.0 * h;
    if (skip) continue;
    const double dw = (-flux(x + 2.0 * h) + 8.0 * flux(x + h) - 8.0 * flux(x - h) + flux(x - 2.0 * h)) /
                      (12.0 * h);
    const double fx = f(x);
    worst = std::max(worst, std::abs(-dw + value(x) - fx) / (1.0 + std::abs(fx)));
  }
  return worst;
}

Solution solve(const BvpProblem& problem, const SolveOptions& options) {
  auto impl = std::make_shared<Solution::Impl>(problem, FundamentalPair(problem.alpha()));
  Solution::Impl& s = *impl;
  const RhsFunction& f = problem.f();
  const double alpha = problem.alpha().value();
  const bool dirichlet = problem.bc() == BoundaryKind::Dirichlet;

  const int depth = options.depth > 0 ? options.depth : auto_depth(alpha);
  s.grid = SampleGrid::dyadic(depth, f.breakpoints(), options.order);
  s.w0 = s.pair.wronskian();
  const std::vector<double>& xs = s.grid.x();
  const std::size_t n = xs.size();

  std::vector<PairSample> samples(n);
  std::vector<double> fv(n, 0.0);
  std::vector<double> h_minus(n, 0.0);
  std::vector<double> h_plus(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    samples[i] = s.pair.sample(xs[i]);
    fv[i] = f.is_zero() ? 0.0 : f(xs[i]);
    h_minus[i] = fv[i] * samples[i].minus;
    h_plus[i] = fv[i] * samples[i].plus;
  }

  const double eps = s.grid.lower();
  s.minus_tail = s.tail_minus(eps);
  s.plus_tail_lower = s.tail_plus(eps);
  s.minus_offsets = s.grid.panel_offsets(h_minus);
  s.plus_offsets = dirichlet ? s.grid.panel_offsets(h_plus) : s.grid.panel_offsets_right(h_plus);
  const std::vector<double> run_minus = s.grid.cumulative(h_minus, s.minus_tail);
  std::vector<double> run_plus;
  if (dirichlet) {
    run_plus = s.grid.cumulative(h_plus, s.plus_tail_lower);
  } else {
    run_plus = s.grid.cumulative_from_right(h_plus);
    for (double& v : run_plus) v = -v;
    s.plus_right_lower = -run_plus.front() + s.panel_integral(eps, s.grid.x().front(), false);
  }

  // Boundary functionals applied to (phi_plus, phi_minus, F).
  const PairSample at_one = s.pair.sample(1.0);
  if (std::abs(at_one.plus) < kMatchingFloor || std::abs(at_one.minus) < kMatchingFloor) {
    throw SingularMatchingError("solve: a fundamental solution nearly vanishes at x = 1");
  }
  const double minus_one = s.minus_tail + s.grid.integral(h_minus);
  const double plus_one = dirichlet ? s.plus_tail_lower + s.grid.integral(h_plus) : 0.0;
  const BoundaryRow value_one{at_one.plus, at_one.minus,
                              (at_one.minus * plus_one - at_one.plus * minus_one) / s.w0};
  const BoundaryRow value_zero{s.pair.value_limit_plus(), s.pair.b1(), 0.0};
  const BoundaryRow flux_zero{s.pair.flux_limit_plus(), 0.0, 0.0};
  const BoundaryRow& first = dirichlet ? value_zero : flux_zero;
  const double det = first.plus * value_one.minus - first.minus * value_one.plus;
  if (!std::isfinite(det) || std::abs(det) < kMatchingFloor) {
    throw SingularMatchingError("solve: boundary matching system is singular");
  }
  s.A = (-first.particular * value_one.minus + first.minus * value_one.particular) / det;
  s.B = (-first.plus * value_one.particular + value_one.plus * first.particular) / det;

  SampledSolution out;
  out.alpha = alpha;
  out.bc = problem.bc();
  out.grid = s.grid;
  out.u.resize(n);
  out.du.resize(n);
  out.flux.resize(n);
  out.f = fv;
  for (std::size_t i = 0; i < n; ++i) {
    const Solution::Impl::Point pt{samples[i], run_minus[i], run_plus[i]};
    out.u[i] = s.value(pt);
    out.flux[i] = s.flux(pt);
    out.du[i] = out.flux[i] * std::pow(xs[i], -2.0 * alpha);
  }
  if (dirichlet) {
    out.u_origin = 0.0;
    out.flux_origin = s.A * s.pair.flux_limit_plus();
  } else {
    out.flux_origin = 0.0;
    const double blowup = f.log_singular() ? 1.0 : f.blowup_exponent();
    if (f.is_zero()) {
      out.u_origin = 0.0;
    } else if (blowup < 2.0 - 2.0 * alpha && !(f.log_singular() && alpha >= 0.5)) {
      const double plus_zero = -(s.plus_right_lower + s.plus_tail_lower);
      out.u_origin = s.pair.b1() * (s.B + plus_zero / s.w0);
    } else {
      out.u_origin = std::numeric_limits<double>::quiet_NaN();
    }
  }

  std::shared_ptr<const Solution::Impl> shared = impl;
  out.value = [shared](double x) { return shared->value(shared->evaluate(x)); };
  out.flux_at = [shared](double x) { return shared->flux(shared->evaluate(x)); };

  Solution sol(shared);
  sol.sampled_ = std::move(out);
  return sol;
}

double aux_moment(const AuxiliaryG& g, const RhsFunction& f) {
  if (f.is_zero()) return 0.0;
  const SampleGrid grid = SampleGrid::dyadic(60, f.breakpoints());
  std::vector<double> h(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) h[i] = f(grid.x()[i]) * g(grid.x()[i]);
  return grid.integral(h) + origin_tail(f, g, true, grid.lower());
}

double flux_limit(const Solution& solution) {
  if (solution.problem().bc() != BoundaryKind::Dirichlet) {
    throw DomainError("flux_limit: defined for Dirichlet solutions");
  }
  return aux_moment(make_aux_g(solution.problem().alpha()), solution.problem().f());
}

double dirichlet_origin_coefficient(const Solution& solution) {
  const double alpha = solution.problem().alpha().value();
  return flux_limit(solution) / (1.0 - 2.0 * alpha);
}

}  // namespace singular_sl
