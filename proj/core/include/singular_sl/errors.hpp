#pragma once

#include <stdexcept>
#include <string>

namespace singular_sl {

/// Argument outside the domain of an operation (z <= 0 for Gamma, y < 0 for
/// Bessel series, alpha >= 1, inadmissible boundary kind, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A series did not reach its truncation tolerance within the term cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature could not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The 2x2 boundary-matching system is (numerically) singular.
class SingularMatchingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Galerkin assembly is ill-posed for the requested parameters.
class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tridiagonal elimination hit a vanishing pivot.
class NumericalBreakdown : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A leading expansion coefficient was requested on a basis where it does not
/// exist (a1 on the logarithmic K branch).
class CoefficientUndefined : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A run configuration is malformed or inadmissible (bad key, Dirichlet data
/// with alpha >= 1/2, missing seed, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace singular_sl
