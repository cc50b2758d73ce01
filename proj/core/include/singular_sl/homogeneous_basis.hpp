#pragma once

#include <functional>

#include "singular_sl/special_functions.hpp"

namespace singular_sl {

/// The exponent alpha < 1 of the weight x^(2 alpha), with the quantities of the
/// Bessel change of variables y = x^(1-alpha) / (1-alpha) cached.
class AlphaParam {
 public:
  /// Throws DomainError unless alpha is finite and alpha < 1.
  explicit AlphaParam(double alpha);

  double value() const { return alpha_; }
  /// (1/2 - alpha) / (1 - alpha); positive for alpha < 1/2, negative above.
  double signed_order() const { return mu_; }
  /// nu = |signed_order()|.
  double nu() const { return order_.nu(); }
  const special::BesselOrder& order() const { return order_; }
  bool integer_order() const { return order_.is_integer(); }
  /// 1 / (1 - alpha).
  double scale() const { return scale_; }
  /// y(x) = scale * x^(1-alpha).
  double bessel_argument(double x) const;

 private:
  double alpha_;
  double mu_;
  double scale_;
  special::BesselOrder order_;
};

enum class BasisKind { IPlusMinus, IAndK };

/// Values of the fundamental pair and their weighted fluxes x^(2 alpha) phi' at one point.
struct PairSample {
  double plus = 0.0;
  double minus = 0.0;
  double flux_plus = 0.0;
  double flux_minus = 0.0;
};

/// Fundamental pair of -(x^(2 alpha) u')' + u = 0.
///
/// phi_plus is the branch with a nonzero weighted flux at the origin and
/// phi_minus the zero-flux branch, for every alpha < 1. Both are the
/// compositions x^(1/2-alpha) f(y) with f in {I_mu, I_-mu} (non-integer
/// order) or {K_k, I_k} (integer order k), evaluated from the power series in
/// q = (y/2)^2 with the algebraic prefactors cancelled analytically so that
/// values and fluxes stay accurate down to x ~ 1e-100.
class FundamentalPair {
 public:
  explicit FundamentalPair(const AlphaParam& alpha);

  const AlphaParam& alpha() const { return alpha_; }
  BasisKind basis_kind() const { return kind_; }

  /// phi_plus ~ a1 x^(1-2 alpha) at the origin; throws CoefficientUndefined on
  /// the integer-order (logarithmic) branch.
  double a1() const;
  /// phi_minus(0) = b1.
  double b1() const { return b1_ * scale_minus_; }
  /// phi_minus = b1 + b2 x^(2-2 alpha) + ...
  double b2() const { return b2_ * scale_minus_; }
  /// lim_{x->0} x^(2 alpha) phi_plus'(x).
  double flux_limit_plus() const { return flux_limit_plus_ * scale_plus_; }
  /// lim_{x->0} phi_plus(x): 0 for alpha < 1/2, infinite otherwise.
  double value_limit_plus() const;

  /// Evaluates both branches and their fluxes. Requires x > 0.
  PairSample sample(double x) const;

  double phi_plus(double x) const { return sample(x).plus; }
  double phi_minus(double x) const { return sample(x).minus; }
  double dphi_plus(double x) const;
  double dphi_minus(double x) const;

  /// The constant x^(2 alpha) (phi_plus' phi_minus - phi_minus' phi_plus), taken at x = 1/2.
  double wronskian() const { return wronskian_; }

  /// The same pair with phi_plus multiplied by `plus` and phi_minus by `minus`.
  FundamentalPair scaled(double plus, double minus) const;

 private:
  PairSample sample_unscaled(double x) const;

  AlphaParam alpha_;
  BasisKind kind_;
  double c_;  // scale / 2, so that y/2 = c x^(1-alpha)
  double a1_ = 0.0;
  double b1_ = 0.0;
  double b2_ = 0.0;
  double flux_limit_plus_ = 0.0;
  double scale_plus_ = 1.0;
  double scale_minus_ = 1.0;
  double wronskian_ = 0.0;
};

FundamentalPair make_pair(const AlphaParam& alpha);

struct LeadingCoefficients {
  double a1;
  double b1;
  double b2;
};

/// a1 = (2(1-alpha))^-mu / Gamma(1+mu), b1 = (2(1-alpha))^mu / Gamma(1-mu),
/// b2 = b1 / (4 (1-alpha)^2 (1-mu)) with mu the signed order. Throws
/// CoefficientUndefined on the integer-order branch.
LeadingCoefficients leading_coeffs(const AlphaParam& alpha);

/// g = A phi_plus + B phi_minus with g(1) = 0 and g(0+) = 1 (alpha < 1/2).
class AuxiliaryG {
 public:
  /// Throws DomainError for alpha >= 1/2.
  explicit AuxiliaryG(const AlphaParam& alpha);

  double A() const { return A_; }
  double B() const { return B_; }
  double operator()(double x) const;
  /// x^(2 alpha) g'(x).
  double flux(double x) const;
  /// lim_{x->0} x^(2 alpha) g'(x) = A a1 (1 - 2 alpha).
  double flux_limit() const;
  const FundamentalPair& pair() const { return pair_; }

 private:
  FundamentalPair pair_;
  double A_;
  double B_;
};

AuxiliaryG make_aux_g(const AlphaParam& alpha);

/// -d/dx[x^(2 alpha) phi'(x)] + phi(x). The flux is formed from the analytic
/// derivative and differentiated with a 4th-order centred stencil of step
/// max(1e-6 x, 1e-10).
double ode_residual(const std::function<double(double)>& phi,
                    const std::function<double(double)>& phi_prime, double alpha, double x);

/// Same residual, given the flux x^(2 alpha) phi'(x) directly.
double ode_residual_from_flux(const std::function<double(double)>& phi,
                              const std::function<double(double)>& flux, double x);

}  // namespace singular_sl
