#include "singular_sl/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>

#include "singular_sl/errors.hpp"

namespace singular_sl::quad {
namespace {

template <int N>
GaussRule make_rule() {
  using Boost = boost::math::quadrature::gauss<double, N>;
  const auto& abscissa = Boost::abscissa();
  const auto& weight = Boost::weights();
  GaussRule rule;
  // Boost stores the non-negative half of the symmetric rule.
  for (int i = static_cast<int>(abscissa.size()) - 1; i >= 0; --i) {
    if (abscissa[i] == 0.0) continue;
    rule.nodes.push_back(-abscissa[i]);
    rule.weights.push_back(weight[i]);
  }
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    rule.nodes.push_back(abscissa[i]);
    rule.weights.push_back(weight[i]);
  }
  return rule;
}

double adaptive_step(const Integrand& fn, double a, double b, double whole, const Tolerance& tol,
                     int depth, const GaussRule& rule) {
  const double mid = 0.5 * (a + b);
  const double left = integrate_fixed(fn, a, mid, rule);
  const double right = integrate_fixed(fn, mid, b, rule);
  const double refined = left + right;
  if (std::abs(refined - whole) <= std::max(tol.abs, tol.rel * std::abs(refined))) {
    return refined;
  }
  if (depth >= tol.max_depth) {
    throw QuadratureError("integrate_adaptive: tolerance not reached at maximum depth");
  }
  Tolerance half = tol;
  half.abs *= 0.5;
  return adaptive_step(fn, a, mid, left, half, depth + 1, rule) +
         adaptive_step(fn, mid, b, right, half, depth + 1, rule);
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static const GaussRule r5 = make_rule<5>();
  static const GaussRule r8 = make_rule<8>();
  static const GaussRule r12 = make_rule<12>();
  static const GaussRule r16 = make_rule<16>();
  static const GaussRule r20 = make_rule<20>();
  static const GaussRule r30 = make_rule<30>();
  switch (order) {
    case 5: return r5;
    case 8: return r8;
    case 12: return r12;
    case 16: return r16;
    case 20: return r20;
    case 30: return r30;
    default: throw DomainError("gauss_legendre: unsupported order");
  }
}

double integrate_fixed(const Integrand& fn, double a, double b, const GaussRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (int i = 0; i < rule.size(); ++i) {
    sum += rule.weights[i] * fn(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

double integrate_adaptive(const Integrand& fn, double a, double b, const Tolerance& tol) {
  if (a == b) return 0.0;
  const GaussRule& rule = gauss_legendre(12);
  const double whole = integrate_fixed(fn, a, b, rule);
  return adaptive_step(fn, a, b, whole, tol, 0, rule);
}

DyadicResult integrate_dyadic(const Integrand& fn, double a, double b, const Tolerance& tol,
                              int max_levels, const std::function<double(double)>& tail) {
  if (!(b > a) || a < 0.0) {
    throw DomainError("integrate_dyadic: requires 0 <= a < b");
  }
  DyadicResult out;
  double hi = b;
  for (int level = 0; level < max_levels; ++level) {
    const double lo = std::max(a, 0.5 * hi);
    Tolerance level_tol = tol;
    level_tol.abs = tol.abs * std::pow(0.5, std::min(level, 30));
    const double piece = integrate_adaptive(fn, lo, hi, level_tol);
    out.level_contributions.push_back(piece);
    out.value += piece;
    hi = lo;
    if (lo == a) break;
  }
  if (a == 0.0 && hi > 0.0 && tail) {
    out.value += tail(hi);
  }
  if (a == 0.0 && !out.level_contributions.empty()) {
    const double last = std::abs(out.level_contributions.back());
    out.divergent = last > 0.01 * std::abs(out.value);
  }
  return out;
}

}  // namespace singular_sl::quad
