#include "singular_sl/special_functions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "singular_sl/errors.hpp"

namespace singular_sl::special {
namespace {

constexpr double kRelTruncation = 1e-16;
constexpr double kAbsTruncation = 1e-300;

bool below_truncation(double term, double sum) {
  return std::abs(term) <= kRelTruncation * std::abs(sum) + kAbsTruncation;
}

void check_series_argument(double y, const char* who) {
  if (!std::isfinite(y) || y < 0.0) {
    throw DomainError(std::string(who) + ": argument must be finite and >= 0");
  }
  if (y > kSeriesYMax) {
    throw DomainError(std::string(who) + ": argument exceeds the series range y_max = 30");
  }
}

bool near_integer(double v) {
  return std::abs(v - std::round(v)) < kIntegerOrderTolerance;
}

// sum_m q^m / (m! Gamma(m + nu + 1)), the I_nu series with (y/2)^nu factored out.
SeriesEvalResult reduced_i_series(double nu, double q) {
  SeriesEvalResult out;
  double term = reciprocal_gamma(nu + 1.0);
  double sum = 0.0;
  for (int m = 0; m < kSeriesTermCap; ++m) {
    sum += term;
    out.terms_used = m + 1;
    const double denom = (m + 1.0) * (m + 1.0 + nu);
    const double next = term * q / denom;
    // Terms may still grow while m + 1 + nu < 0 (negative orders).
    if (m + 1.0 + nu > 0.0 && below_truncation(next, sum)) {
      out.value = sum;
      out.truncation_estimate = std::abs(next);
      return out;
    }
    term = next;
  }
  throw ConvergenceError("bessel_i: series did not converge within the term cap");
}

}  // namespace

BesselOrder::BesselOrder(double nu) {
  if (!std::isfinite(nu) || nu < 0.0) {
    throw DomainError("BesselOrder: order must be finite and >= 0");
  }
  is_integer_ = near_integer(nu);
  nu_ = is_integer_ ? std::round(nu) : nu;
}

double gamma(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("gamma: argument must be > 0");
  }
  return std::tgamma(z);
}

double reciprocal_gamma(double z) {
  if (!std::isfinite(z)) {
    throw DomainError("reciprocal_gamma: argument must be finite");
  }
  if (z <= 0.0 && z == std::round(z)) {
    return 0.0;
  }
  return 1.0 / std::tgamma(z);
}

double digamma(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("digamma: argument must be > 0");
  }
  // Shift into the asymptotic range, then use the Bernoulli expansion.
  double shift = 0.0;
  while (z < 12.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  const double inv = 1.0 / z;
  const double inv2 = inv * inv;
  const double tail =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
  return shift + std::log(z) - 0.5 * inv - tail;
}

SeriesEvalResult bessel_i_reduced(double order, double q) {
  if (!std::isfinite(order)) {
    throw DomainError("bessel_i_reduced: order must be finite");
  }
  const double q_max = 0.25 * kSeriesYMax * kSeriesYMax;
  if (!std::isfinite(q) || q < 0.0 || q > q_max) {
    throw DomainError("bessel_i_reduced: argument outside the series range");
  }
  return reduced_i_series(order, q);
}

SeriesEvalResult bessel_i(const BesselOrder& order, double y) {
  return bessel_i(order.nu(), y);
}

SeriesEvalResult bessel_i(double order, double y) {
  check_series_argument(y, "bessel_i");
  if (!std::isfinite(order)) {
    throw DomainError("bessel_i: order must be finite");
  }
  if (order < 0.0 && near_integer(order)) {
    order = -order;  // I_{-n} = I_n
  }
  if (order < 0.0 && y == 0.0) {
    throw DomainError("bessel_i: negative non-integer order is singular at y = 0");
  }
  const double half = 0.5 * y;
  SeriesEvalResult r = reduced_i_series(order, half * half);
  const double scale = order == 0.0 ? 1.0 : std::pow(half, order);
  r.value *= scale;
  r.truncation_estimate *= std::abs(scale);
  return r;
}

SeriesEvalResult bessel_k_int(int n, double y) {
  if (n < 0) {
    throw DomainError("bessel_k_int: order must be >= 0");
  }
  check_series_argument(y, "bessel_k_int");
  if (y == 0.0) {
    throw DomainError("bessel_k_int: K_n is singular at y = 0");
  }
  const double half = 0.5 * y;
  const double q = half * half;
  const double log_half = std::log(half);

  // Finite singular part: 1/2 sum_{m<n} (-1)^m (n-m-1)!/m! (y/2)^(2m-n).
  double finite = 0.0;
  if (n > 0) {
    double fact_nm1 = std::tgamma(static_cast<double>(n));  // (n-1)!
    double inv_mfact = 1.0;
    double power = std::pow(half, -n);
    double sign = 1.0;
    for (int m = 0; m < n; ++m) {
      finite += sign * fact_nm1 * inv_mfact * power;
      sign = -sign;
      power *= q;
      inv_mfact /= (m + 1.0);
      if (n - m - 1 > 0) fact_nm1 /= (n - m - 1.0);
    }
    finite *= 0.5;
  }

  // Logarithmic series: (-1)^(n+1) sum (y/2)^(n+2m)/(m!(n+m)!) {log(y/2) - psi(m+1)/2 - psi(n+m+1)/2}.
  // For n = 0 this is the K_0 series: -log(y/2) I_0 + sum (y/2)^(2m)/(m!)^2 psi(m+1).
  double psi_m1 = -kEulerGamma;         // psi(m+1)
  double psi_nm1 = digamma(n + 1.0);    // psi(n+m+1)
  double coeff = std::pow(half, n) / std::tgamma(n + 1.0);  // (y/2)^(n+2m)/(m!(n+m)!)
  double sum = 0.0;
  SeriesEvalResult out;
  for (int m = 0; m < kSeriesTermCap; ++m) {
    const double bracket = n == 0 ? (log_half - psi_m1) : (log_half - 0.5 * psi_m1 - 0.5 * psi_nm1);
    const double term = coeff * bracket;
    sum += term;
    out.terms_used = m + 1;
    psi_m1 += 1.0 / (m + 1.0);
    psi_nm1 += 1.0 / (n + m + 1.0);
    coeff *= q / ((m + 1.0) * (n + m + 1.0));
    const double next_bracket =
        n == 0 ? (log_half - psi_m1) : (log_half - 0.5 * psi_m1 - 0.5 * psi_nm1);
    const double next = coeff * next_bracket;
    if (below_truncation(next, sum) && below_truncation(coeff, sum)) {
      const double sign = (n % 2 == 0) ? -1.0 : 1.0;  // (-1)^(n+1)
      out.value = finite + sign * sum;
      out.truncation_estimate = std::abs(next);
      return out;
    }
  }
  throw ConvergenceError("bessel_k_int: series did not converge within the term cap");
}

double bessel_i_prime(const BesselOrder& order, double y) {
  if (!(y > 0.0)) {
    throw DomainError("bessel_i_prime: argument must be > 0");
  }
  const double nu = order.nu();
  return 0.5 * (bessel_i(nu + 1.0, y).value + bessel_i(nu - 1.0, y).value);
}

double bessel_k_prime(int n, double y) {
  if (!(y > 0.0)) {
    throw DomainError("bessel_k_prime: argument must be > 0");
  }
  if (n < 0) {
    throw DomainError("bessel_k_prime: order must be >= 0");
  }
  const int lower = n == 0 ? 1 : n - 1;
  return -0.5 * (bessel_k_int(n + 1, y).value + bessel_k_int(lower, y).value);
}

}  // namespace singular_sl::special
