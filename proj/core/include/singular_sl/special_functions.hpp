#pragma once

// Gamma, digamma and the modified Bessel functions I_nu, K_n evaluated from
// their power series around the origin. Arguments are restricted to the
// series range y <= kSeriesYMax; no large-argument asymptotics are used.

namespace singular_sl::special {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kSeriesYMax = 30.0;
inline constexpr int kSeriesTermCap = 200;
inline constexpr double kIntegerOrderTolerance = 1e-9;

/// Order of a modified Bessel function. Orders within kIntegerOrderTolerance
/// of an integer are snapped onto it and flagged as integer.
class BesselOrder {
 public:
  /// Throws DomainError for nu < 0 or non-finite nu.
  explicit BesselOrder(double nu);

  double nu() const { return nu_; }
  bool is_integer() const { return is_integer_; }
  /// Only meaningful when is_integer().
  int as_integer() const { return static_cast<int>(nu_); }

 private:
  double nu_;
  bool is_integer_;
};

struct SeriesEvalResult {
  double value = 0.0;
  int terms_used = 0;
  /// Magnitude of the first omitted term.
  double truncation_estimate = 0.0;
};

/// Gamma(z) for z > 0.
double gamma(double z);

/// 1 / Gamma(z) for any real z (zero at the poles 0, -1, -2, ...).
double reciprocal_gamma(double z);

/// psi(z) = Gamma'(z) / Gamma(z) for z > 0.
double digamma(double z);

/// I_nu(y) = sum_m (y/2)^(2m+nu) / (m! Gamma(m+nu+1)).
SeriesEvalResult bessel_i(const BesselOrder& order, double y);

/// Same series for an arbitrary real order. Negative integer orders use
/// I_{-n} = I_n; negative non-integer orders use the series as written, which
/// requires y > 0.
SeriesEvalResult bessel_i(double order, double y);

/// sum_m q^m / (m! Gamma(m + order + 1)), i.e. I_order(y) (y/2)^-order with
/// q = (y/2)^2. Any real order; q must satisfy q <= (y_max/2)^2.
SeriesEvalResult bessel_i_reduced(double order, double q);

/// K_n(y) for integer n >= 0 from the logarithmic series around y = 0.
SeriesEvalResult bessel_k_int(int n, double y);

/// I_nu'(y) = (I_{nu+1}(y) + I_{nu-1}(y)) / 2.
double bessel_i_prime(const BesselOrder& order, double y);

/// K_n'(y) = -(K_{n+1}(y) + K_{n-1}(y)) / 2 with K_{-1} = K_1.
double bessel_k_prime(int n, double y);

}  // namespace singular_sl::special
