#pragma once

#include <functional>
#include <span>
#include <vector>

namespace singular_sl::quad {

using Integrand = std::function<double(double)>;

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

/// Supported orders: 5, 8, 12, 16, 20, 30.
const GaussRule& gauss_legendre(int order);

/// Fixed-order rule mapped to [a, b].
double integrate_fixed(const Integrand& fn, double a, double b, const GaussRule& rule);

struct Tolerance {
  double abs = 1e-10;
  double rel = 1e-10;
  int max_depth = 40;
};

/// Recursive bisection with 12-point Gauss-Legendre panels. Throws
/// QuadratureError if the depth limit is reached before convergence.
double integrate_adaptive(const Integrand& fn, double a, double b, const Tolerance& tol = {});

struct DyadicResult {
  double value = 0.0;
  /// Contribution of each dyadic level, outermost first.
  std::vector<double> level_contributions;
  /// Contribution of the deepest level exceeded 1% of the accumulated total.
  bool divergent = false;
};

/// Integrates over (a, b) on the partition b*2^-k, refining toward the origin.
/// With a == 0 the partition stops after `max_levels` levels and the optional
/// `tail` callback supplies the integral over (0, b*2^-max_levels).
DyadicResult integrate_dyadic(const Integrand& fn, double a, double b, const Tolerance& tol = {},
                              int max_levels = 60,
                              const std::function<double(double)>& tail = nullptr);

}  // namespace singular_sl::quad
