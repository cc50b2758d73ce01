#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "singular_sl/homogeneous_basis.hpp"
#include "singular_sl/rhs.hpp"
#include "singular_sl/sampled.hpp"

namespace singular_sl {

/// One instance of -(x^(2 alpha) u')' + u = f on (0, 1], u(1) = 0.
class BvpProblem {
 public:
  /// Throws DomainError for Dirichlet data with alpha >= 1/2.
  BvpProblem(AlphaParam alpha, RhsFunction f, BoundaryKind bc,
             LebesgueExponent p = LebesgueExponent::inf());

  const AlphaParam& alpha() const { return alpha_; }
  const RhsFunction& f() const { return f_; }
  BoundaryKind bc() const { return bc_; }
  const LebesgueExponent& p() const { return p_; }

 private:
  AlphaParam alpha_;
  RhsFunction f_;
  BoundaryKind bc_;
  LebesgueExponent p_;
};

struct ParticularValue {
  double value = 0.0;
  double derivative = 0.0;
};

/// F = (phi_minus int_0^x f phi_plus - phi_plus int_0^x f phi_minus) / W0, where W0
/// is the pair's constant Wronskian, so that -(x^(2a) F')' + F = f.
ParticularValue particular_solution(const FundamentalPair& pair, const RhsFunction& f, double x);

struct SolveOptions {
  /// Number of dyadic levels of the sample grid; 0 picks
  /// clamp(ceil(40 / (2 - 2 alpha)), 60, 240).
  int depth = 0;
  int order = 12;
};

/// Closed-form solution u = A phi_plus + B phi_minus + F.
class Solution {
 public:
  const BvpProblem& problem() const;
  const FundamentalPair& pair() const;
  double A() const;
  double B() const;

  /// u, u' and x^(2 alpha) u' at x in (0, 1].
  double value(double x) const;
  double derivative(double x) const;
  double flux(double x) const;
  /// Limits at the origin; u_origin is NaN when u is unbounded there.
  double u_origin() const { return sampled_.u_origin; }
  double flux_origin() const { return sampled_.flux_origin; }

  const SampledSolution& sampled() const { return sampled_; }

  /// max |-w' + u - f| / (1 + |f|) over interior points where f is continuous,
  /// with w' from a centred difference of the analytic flux.
  double residual_max() const;

 private:
  friend Solution solve(const BvpProblem& problem, const SolveOptions& options);
  struct Impl;

  explicit Solution(std::shared_ptr<const Impl> impl);

  std::shared_ptr<const Impl> impl_;
  SampledSolution sampled_;
};

/// Variation of parameters with boundary matching. Throws SingularMatchingError
/// if |phi_plus(1)| or |phi_minus(1)| < 1e-12.
Solution solve(const BvpProblem& problem, const SolveOptions& options = {});

/// int_0^1 f g with g the auxiliary function (Dirichlet, alpha < 1/2).
double flux_limit(const Solution& solution);

/// (1 / (1 - 2 alpha)) int_0^1 g f, the limit of x^(2 alpha - 1) u(x) at 0.
double dirichlet_origin_coefficient(const Solution& solution);

/// int_0^1 f g for an arbitrary rhs.
double aux_moment(const AuxiliaryG& g, const RhsFunction& f);

}  // namespace singular_sl
