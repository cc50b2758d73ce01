#include "singular_sl/homogeneous_basis.hpp"

#include <cmath>
#include <limits>

#include "singular_sl/errors.hpp"

namespace singular_sl {
namespace {

using special::bessel_i_reduced;

constexpr int kTermCap = special::kSeriesTermCap;

struct KBranch {
  double value;
  double flux;
};

// x^(1/2-alpha) K_k(y) and its flux, written in x so that the x^(1-2 alpha)
// singular part and the logarithmic series are evaluated separately.
KBranch k_branch(int k, double alpha, double c, double x) {
  const double lx = std::log(x);
  const double q = c * c * std::exp((2.0 - 2.0 * alpha) * lx);
  const double ell = std::log(c) + (1.0 - alpha) * lx;

  double finite_value = 0.0;
  double finite_flux = 0.0;
  if (k > 0) {
    double coeff = std::tgamma(static_cast<double>(k));  // (k-1)!/0!
    double qm = 1.0;
    for (int m = 0; m < k; ++m) {
      const double signed_coeff = (m % 2 == 0 ? 1.0 : -1.0) * coeff * qm;
      finite_value += signed_coeff;
      finite_flux += signed_coeff * (1.0 - 2.0 * alpha + m * (2.0 - 2.0 * alpha));
      qm *= q;
      if (k - m - 1 > 0) coeff /= (k - m - 1.0);
      coeff /= (m + 1.0);
    }
    const double pre = 0.5 * std::pow(c, -k);
    finite_value *= pre * std::exp((1.0 - 2.0 * alpha) * lx);
    finite_flux *= pre;
  }

  double psi_m1 = -special::kEulerGamma;
  double psi_km1 = special::digamma(k + 1.0);
  double t = 1.0 / std::tgamma(k + 1.0);
  double log_value = 0.0;
  double log_flux = 0.0;
  int m = 0;
  for (; m < kTermCap; ++m) {
    const double h = 0.5 * (psi_m1 + psi_km1);
    const double value_term = t * (ell - h);
    const double flux_term = t * (m * (2.0 - 2.0 * alpha) * (ell - h) + (1.0 - alpha));
    log_value += value_term;
    log_flux += flux_term;
    psi_m1 += 1.0 / (m + 1.0);
    psi_km1 += 1.0 / (k + m + 1.0);
    t *= q / ((m + 1.0) * (k + m + 1.0));
    const double scale = std::abs(t) * (std::abs(ell) + std::abs(psi_km1) + m + 2.0);
    if (scale <= 1e-16 * (std::abs(log_value) + std::abs(log_flux)) + 1e-300) break;
  }
  if (m == kTermCap) {
    throw ConvergenceError("FundamentalPair: K-branch series did not converge");
  }
  const double sign = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^(k+1)
  const double ck = std::pow(c, k);
  KBranch out;
  out.value = finite_value + sign * ck * log_value;
  out.flux = finite_flux + sign * ck * std::exp((2.0 * alpha - 1.0) * lx) * log_flux;
  return out;
}

// Above this argument the logarithmic series for K_k loses digits to
// cancellation against I_k; the integral representation is used instead.
constexpr double kKSeriesSwitch = 2.0;

// K_{k-1}, K_k, K_{k+1} from K_v(y) = int_0^inf exp(-y cosh t) cosh(v t) dt by the
// trapezoidal rule, which converges geometrically for this integrand.
struct KTriple {
  double below;
  double centre;
  double above;
};

KTriple k_integral(int k, double y) {
  constexpr double step = 0.125;
  KTriple out{0.0, 0.0, 0.0};
  for (int i = 0;; ++i) {
    const double t = i * step;
    const double e = std::exp(-y * std::cosh(t));
    const double w = (i == 0 ? 0.5 : 1.0) * e;
    out.below += w * std::cosh((k - 1) * t);
    out.centre += w * std::cosh(k * t);
    out.above += w * std::cosh((k + 1) * t);
    if (e * std::cosh((k + 1) * t) < 1e-18 * out.centre) break;
  }
  out.below *= step;
  out.centre *= step;
  out.above *= step;
  return out;
}

KBranch k_branch_integral(int k, double alpha, double c, double x) {
  const double y = 2.0 * c * std::pow(x, 1.0 - alpha);
  const KTriple kt = k_integral(k, y);
  const double k_prime = -0.5 * (kt.above + kt.below);
  return KBranch{std::pow(x, 0.5 - alpha) * kt.centre,
                 (0.5 - alpha) * std::pow(x, alpha - 0.5) * kt.centre + std::sqrt(x) * k_prime};
}

}  // namespace

AlphaParam::AlphaParam(double alpha)
    : alpha_(alpha),
      mu_((0.5 - alpha) / (1.0 - alpha)),
      scale_(1.0 / (1.0 - alpha)),
      order_(std::isfinite(alpha) && alpha < 1.0 ? std::abs((0.5 - alpha) / (1.0 - alpha)) : 0.0) {
  if (!std::isfinite(alpha) || !(alpha < 1.0)) {
    throw DomainError("AlphaParam: alpha must be finite and < 1");
  }
  if (order_.is_integer()) {
    mu_ = mu_ < 0.0 ? -order_.nu() : order_.nu();
  }
}

double AlphaParam::bessel_argument(double x) const {
  return scale_ * std::pow(x, 1.0 - alpha_);
}

FundamentalPair::FundamentalPair(const AlphaParam& alpha)
    : alpha_(alpha),
      kind_(alpha.integer_order() ? BasisKind::IAndK : BasisKind::IPlusMinus),
      c_(0.5 * alpha.scale()) {
  const double a = alpha_.value();
  const double mu = alpha_.signed_order();
  b1_ = std::pow(c_, -mu) * special::reciprocal_gamma(1.0 - mu);
  b2_ = b1_ * c_ * c_ / (1.0 - mu);
  if (kind_ == BasisKind::IPlusMinus) {
    a1_ = std::pow(c_, mu) * special::reciprocal_gamma(1.0 + mu);
    flux_limit_plus_ = a1_ * (1.0 - 2.0 * a);
  } else {
    const int k = alpha_.order().as_integer();
    flux_limit_plus_ = k == 0 ? -(1.0 - a)
                              : 0.5 * std::pow(c_, -k) * std::tgamma(static_cast<double>(k)) *
                                    (1.0 - 2.0 * a);
  }
  const PairSample s = sample_unscaled(0.5);
  wronskian_ = s.flux_plus * s.minus - s.flux_minus * s.plus;
}

double FundamentalPair::a1() const {
  if (kind_ == BasisKind::IAndK) {
    throw CoefficientUndefined("a1 is undefined on the logarithmic (integer-order) branch");
  }
  return a1_ * scale_plus_;
}

double FundamentalPair::value_limit_plus() const {
  if (alpha_.value() < 0.5) return 0.0;
  return std::copysign(std::numeric_limits<double>::infinity(), flux_limit_plus());
}

PairSample FundamentalPair::sample_unscaled(double x) const {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("FundamentalPair: evaluation point must be > 0");
  }
  const double a = alpha_.value();
  const double mu = alpha_.signed_order();
  const double lx = std::log(x);
  const double q = c_ * c_ * std::exp((2.0 - 2.0 * a) * lx);

  PairSample s;
  const double c_minus = std::pow(c_, -mu);
  s.minus = c_minus * bessel_i_reduced(-mu, q).value;
  s.flux_minus = c_minus * c_ * c_ * (2.0 - 2.0 * a) * x * bessel_i_reduced(1.0 - mu, q).value;

  if (kind_ == BasisKind::IPlusMinus) {
    const double c_plus = std::pow(c_, mu);
    const double s_mu = bessel_i_reduced(mu, q).value;
    const double s_mu1 = bessel_i_reduced(mu + 1.0, q).value;
    s.plus = c_plus * std::exp((1.0 - 2.0 * a) * lx) * s_mu;
    s.flux_plus = c_plus * ((1.0 - 2.0 * a) * s_mu + (2.0 - 2.0 * a) * q * s_mu1);
  } else {
    const int k = alpha_.order().as_integer();
    const KBranch kb = 4.0 * q > kKSeriesSwitch * kKSeriesSwitch ? k_branch_integral(k, a, c_, x)
                                                                  : k_branch(k, a, c_, x);
    s.plus = kb.value;
    s.flux_plus = kb.flux;
  }
  return s;
}

PairSample FundamentalPair::sample(double x) const {
  PairSample s = sample_unscaled(x);
  s.plus *= scale_plus_;
  s.flux_plus *= scale_plus_;
  s.minus *= scale_minus_;
  s.flux_minus *= scale_minus_;
  return s;
}

double FundamentalPair::dphi_plus(double x) const {
  return sample(x).flux_plus * std::pow(x, -2.0 * alpha_.value());
}

double FundamentalPair::dphi_minus(double x) const {
  return sample(x).flux_minus * std::pow(x, -2.0 * alpha_.value());
}

FundamentalPair FundamentalPair::scaled(double plus, double minus) const {
  FundamentalPair copy = *this;
  copy.scale_plus_ *= plus;
  copy.scale_minus_ *= minus;
  copy.wronskian_ *= plus * minus;
  return copy;
}

FundamentalPair make_pair(const AlphaParam& alpha) { return FundamentalPair(alpha); }

LeadingCoefficients leading_coeffs(const AlphaParam& alpha) {
  const FundamentalPair pair(alpha);
  return LeadingCoefficients{pair.a1(), pair.b1(), pair.b2()};
}

AuxiliaryG::AuxiliaryG(const AlphaParam& alpha) : pair_(alpha), A_(0.0), B_(0.0) {
  if (!(alpha.value() < 0.5)) {
    throw DomainError("make_aux_g: requires alpha < 1/2");
  }
  const PairSample at_one = pair_.sample(1.0);
  B_ = 1.0 / pair_.b1();
  A_ = -at_one.minus / (pair_.b1() * at_one.plus);
}

double AuxiliaryG::operator()(double x) const {
  const PairSample s = pair_.sample(x);
  return A_ * s.plus + B_ * s.minus;
}

double AuxiliaryG::flux(double x) const {
  const PairSample s = pair_.sample(x);
  return A_ * s.flux_plus + B_ * s.flux_minus;
}

double AuxiliaryG::flux_limit() const { return A_ * pair_.flux_limit_plus(); }

AuxiliaryG make_aux_g(const AlphaParam& alpha) { return AuxiliaryG(alpha); }

double ode_residual_from_flux(const std::function<double(double)>& phi,
                              const std::function<double(double)>& flux, double x) {
  if (!(x > 0.0)) {
    throw DomainError("ode_residual: x must be > 0");
  }
  const double h = std::max(1e-6 * x, 1e-10);
  const double derivative =
      (-flux(x + 2.0 * h) + 8.0 * flux(x + h) - 8.0 * flux(x - h) + flux(x - 2.0 * h)) / (12.0 * h);
  return -derivative + phi(x);
}

double ode_residual(const std::function<double(double)>& phi,
                    const std::function<double(double)>& phi_prime, double alpha, double x) {
  const auto flux = [&](double t) { return std::pow(t, 2.0 * alpha) * phi_prime(t); };
  return ode_residual_from_flux(phi, flux, x);
}

}  // namespace singular_sl
