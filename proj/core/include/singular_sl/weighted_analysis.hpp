#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "singular_sl/closed_form_solver.hpp"
#include "singular_sl/rhs.hpp"
#include "singular_sl/sampled.hpp"

namespace singular_sl {

struct NormValue {
  double value = 0.0;
  /// The deepest dyadic octave carried more than 1% of the integral.
  bool divergent = false;
};

/// ||fn||_{L^p(a, b)}. Finite p: dyadic partition b 2^-k refined toward a,
/// adaptive Gauss-Legendre per level at relative tolerance 1e-8; when a == 0
/// the last 60 levels are closed with a log-power tail model. INF: max |fn|
/// over 10^4 points graded toward a. Breakpoints inside (a, b) split the
/// partition so that jumps sit on panel edges.
NormValue lp_norm(const std::function<double(double)>& fn, const LebesgueExponent& p, double a = 0.0,
                  double b = 1.0, const std::vector<double>& breakpoints = {});
NormValue lp_norm(const RhsFunction& f, const LebesgueExponent& p);

/// ||values||_{L^p} on a sample grid, closed at the origin with a power-law
/// tail fitted to the innermost panel. INF is the max over the nodes.
NormValue sampled_lp_norm(const SampleGrid& grid, const std::vector<double>& values,
                          const LebesgueExponent& p);

/// (sum_i ||c_i||^p)^(1/p), or the max for INF.
NormValue combine_norms(const std::vector<NormValue>& parts, const LebesgueExponent& p);

/// int_0^eps h for h ~ C x^e (1 - ln x)^s near 0, with (e, s) fitted from
/// h at eps, eps/2, eps/4. Sets `divergent` (and returns 0) when the fitted
/// model is not integrable.
double log_power_tail(const std::function<double(double)>& h, double eps, bool* divergent = nullptr);

/// max |u(x) - u(y)| / |x - y|^beta over a 500 x 500 staggered grid graded
/// toward 0 with power 4. u_at_zero is used for x = 0 when finite.
double holder_seminorm(const std::function<double(double)>& u, double u_at_zero, double beta);
double holder_seminorm(const SampledSolution& solution, double beta);

/// Hoelder exponent attached to u: 1/2 - alpha for 0 < alpha < 1/2, 1/2 for
/// alpha <= 0, NaN otherwise.
double holder_exponent(double alpha);

/// Named norms of one solution.
struct RegularityReport {
  double alpha = 0.0;
  BoundaryKind bc = BoundaryKind::Dirichlet;
  LebesgueExponent p = LebesgueExponent::inf();
  std::string rhs;
  SampledSolution::Engine engine = SampledSolution::Engine::ClosedForm;
  std::map<std::string, double> norms;
  /// norms[key] / norms["f_Lp"] (0 for f = 0).
  std::map<std::string, double> ratios;
  std::map<std::string, bool> divergent;
};

/// Keys: f_Lp, u_Lp, flux_W1p, scaled_u_W1p, weighted_u_W2p, scaled_du_Lp,
/// weighted_d2u_Lp, u_W1p, holder (when holder_exponent is defined).
///
/// With w = x^(2a) u' and v = x^(2a-1) u: w' = u - f; v' is taken from
/// x^(2a-2) int_0^x (u - f) s^(1-2a) ds for closed-form Dirichlet solutions and
/// from the product rule otherwise; (x^(2a) u)'' = 2a v' + u - f and
/// x^(2a) u'' = u - f - 2a w / x.
RegularityReport sobolev_norms(const SampledSolution& solution, const RhsFunction& f,
                               const LebesgueExponent& p);

/// Report keys whose ratios are bounded a priori for the given cell.
std::vector<std::string> asserted_quantities(double alpha, BoundaryKind bc, const LebesgueExponent& p);

/// Seeded random right-hand sides sum_j c_j x^(-beta_j) (1 - x)^(m_j) with one
/// to three terms, c_j in [-1, 1], beta_j in [0, 0.9/p], m_j in {0..3}.
class RandomRhsFamily {
 public:
  RandomRhsFamily(LebesgueExponent p, std::uint64_t seed);

  /// The index-th member; depends only on (p, seed, index).
  RhsFunction draw(std::size_t index) const;
  /// The index-th member scaled to unit L^p norm (redrawn on a vanishing norm).
  RhsFunction draw_normalized(std::size_t index) const;

  std::uint64_t seed() const { return seed_; }
  const LebesgueExponent& p() const { return p_; }

 private:
  LebesgueExponent p_;
  std::uint64_t seed_;
};

struct RatioSummary {
  double max = 0.0;
  double median = 0.0;
  bool all_finite = true;
  /// max <= 10 median.
  bool bounded = true;
};

/// Ratio statistics over `samples` random right-hand sides for one (alpha, bc, p) cell.
struct RatioStudy {
  double alpha = 0.0;
  BoundaryKind bc = BoundaryKind::Dirichlet;
  LebesgueExponent p = LebesgueExponent::inf();
  std::uint64_t seed = 0;
  int samples = 0;
  std::vector<std::string> asserted;
  std::map<std::string, RatioSummary> summary;
  int divergent_flags = 0;
  bool pass = true;
};

RatioStudy ratio_study(double alpha, BoundaryKind bc, const LebesgueExponent& p, int samples,
                       std::uint64_t seed);

/// 10^-k for k = kmin..kmax.
std::vector<double> decade_points(int kmin, int kmax);

/// Least-squares slope of ln|y| against ln x.
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

struct ProfileRow {
  double x = 0.0;
  double lower_bound = 0.0;
  double upper_envelope = 0.0;
};

struct Profile {
  double alpha = 0.0;
  LebesgueExponent p = LebesgueExponent::inf();
  std::uint64_t seed = 0;
  int samples = 0;
  std::vector<ProfileRow> rows;
  /// K_D: the origin coefficient of the f = 1 solution. K_N at INF:
  /// |A (2 - 2a) b2| with u = A phi_minus + 1 for f = 1. NaN otherwise.
  double reference = 0.0;

  /// max / min of the upper envelope over the rows.
  double envelope_spread() const;
};

/// sup over unit-norm f of |x^(2a-1) u_D(x)|: lower bound from f = 1, upper
/// envelope from `samples` random normalized right-hand sides. alpha < 1/2.
Profile kd_profile(double alpha, const LebesgueExponent& p, const std::vector<double>& xs, int samples,
                   std::uint64_t seed);

/// sup over unit-norm f of |x^(2a-1+1/p) u_N'(x)|: lower bound from the step
/// family x^(-1/p) 1_(0, x] (f = 1 at INF), upper envelope as above.
Profile kn_profile(double alpha, const LebesgueExponent& p, const std::vector<double>& xs, int samples,
                   std::uint64_t seed);

struct ScanRow {
  double delta = 0.0;
  double integral = 0.0;
};

struct CounterexampleScan {
  double alpha = 0.0;
  std::string rhs;
  std::vector<ScanRow> rows;
  /// Least-squares slope and intercept of I(delta) against 2 (1 - ln delta)^(1/2).
  double slope = 0.0;
  double intercept = 0.0;
  /// ||f||_{L^1}.
  double f_l1 = 0.0;
};

/// I(delta) = int_delta^(1/2) |x^(2a-1) u_N'(x)| dx for the Neumann solution
/// with the given rhs (the logarithmic counterexample by default).
CounterexampleScan counterexample_scan(double alpha, const std::vector<double>& deltas,
                                       const RhsFunction& f = rhs::counterexample());

struct BumpProbe {
  std::string rhs;
  /// Coefficient of the flux-carrying homogeneous branch.
  double coefficient = 0.0;
  double norm_small = 0.0;
  double norm_large = 0.0;
  double growth = 0.0;
};

/// ||x^(2a-1) u_D'||_{L^1(a, 0.1)} for a = a_large and a_small, with the rhs
/// the first bump of a fixed list whose Dirichlet solution has a nonzero
/// flux-carrying component. alpha < 1/2.
BumpProbe bump_probe(double alpha, double a_large = 1e-3, double a_small = 1e-6);

}  // namespace singular_sl
