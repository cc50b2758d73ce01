#include "singular_sl/weighted_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "singular_sl/errors.hpp"
#include "singular_sl/parallel.hpp"
#include "singular_sl/quadrature.hpp"

namespace singular_sl {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDivergenceShare = 0.01;
constexpr int kNormLevels = 60;
constexpr int kSupSamples = 10000;
constexpr int kHolderPoints = 500;

const quad::Tolerance kNormTolerance{1e-15, 1e-8, 40};

double root(double integral, const LebesgueExponent& p) {
  return p.value() == 1.0 ? integral : std::pow(integral, 1.0 / p.value());
}

double sup_sample(const std::function<double(double)>& fn, double a, double b) {
  double best = 0.0;
  for (int i = 1; i <= kSupSamples; ++i) {
    const double t = static_cast<double>(i) / kSupSamples;
    const double v = std::abs(fn(a + (b - a) * t * t * t * t));
    if (std::isnan(v)) return kNaN;
    best = std::max(best, v);
  }
  return best;
}

// Contribution of panels inside the innermost octave [lower, 2 lower].
double innermost_octave(const SampleGrid& grid, const std::vector<double>& h) {
  const double edge = 2.0 * grid.lower() * (1.0 + 1e-12);
  double s = 0.0;
  for (const Panel& p : grid.panels()) {
    if (p.b > edge) break;
    for (int k = 0; k < grid.order(); ++k) s += grid.weights()[p.first + k] * h[p.first + k];
  }
  return s;
}

RhsFunction build_random(const LebesgueExponent& p, std::uint64_t seed, std::size_t index) {
  boost::random::mt19937_64 gen(seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1));
  boost::random::uniform_int_distribution<int> count(1, 3);
  boost::random::uniform_real_distribution<double> coeff(-1.0, 1.0);
  boost::random::uniform_real_distribution<double> unit(0.0, 1.0);
  boost::random::uniform_int_distribution<int> power(0, 3);
  const double beta_max = 0.9 * p.reciprocal();
  const int terms = count(gen);
  std::vector<std::pair<double, RhsFunction>> parts;
  for (int j = 0; j < terms; ++j) {
    const double c = coeff(gen);
    const double beta = beta_max * unit(gen);
    const int m = power(gen);
    parts.emplace_back(1.0, rhs::power_weight(c, beta, m));
  }
  return linear_combination(parts);
}

struct Stats {
  double max = 0.0;
  double median = 0.0;
};

Stats stats(std::vector<double> v) {
  Stats s;
  if (v.empty()) return s;
  s.max = *std::max_element(v.begin(), v.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  s.median = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  return s;
}

}  // namespace

double log_power_tail(const std::function<double(double)>& h, double eps, bool* divergent) {
  if (divergent) *divergent = false;
  const double h0 = std::abs(h(eps));
  const double h1 = std::abs(h(0.5 * eps));
  const double h2 = std::abs(h(0.25 * eps));
  if (h0 == 0.0 || h1 == 0.0 || h2 == 0.0) return 0.0;
  const double l0 = std::log(h0), l1 = std::log(h1), l2 = std::log(h2);
  const double y0 = std::log(1.0 - std::log(eps));
  const double y1 = std::log(1.0 - std::log(0.5 * eps));
  const double y2 = std::log(1.0 - std::log(0.25 * eps));
  const double s = (l0 - 2.0 * l1 + l2) / (y0 - 2.0 * y1 + y2);
  const double e = (l0 - l1 - s * (y0 - y1)) / std::log(2.0);
  const double a = 1.0 + e;
  const double big_t = 1.0 - std::log(eps);

  // int_0^eps h = eps h(eps) int_0^inf exp(-a t) (1 + t / T)^s dt.
  double factor = 0.0;
  if (a <= 1e-6) {
    if (s >= -1.0) {
      if (divergent) *divergent = true;
      return 0.0;
    }
    factor = big_t / (-s - 1.0);
  } else if (std::abs(s) < 1e-6) {
    factor = 1.0 / a;
  } else {
    boost::math::quadrature::exp_sinh<double> integrator;
    factor = integrator.integrate(
        [a, s, big_t](double t) {
          const double v = -a * t + s * std::log1p(t / big_t);
          return std::isfinite(v) ? std::exp(v) : 0.0;
        },
        0.0,
        std::numeric_limits<double>::infinity());
  }
  return eps * h0 * factor;
}

NormValue lp_norm(const std::function<double(double)>& fn, const LebesgueExponent& p, double a, double b,
                  const std::vector<double>& breakpoints) {
  if (!(a >= 0.0) || !(b > a) || b > 1.0) throw DomainError("lp_norm: need 0 <= a < b <= 1");
  NormValue out;
  if (p.is_inf()) {
    out.value = sup_sample(fn, a, b);
    return out;
  }
  const double pv = p.value();
  auto h = [&fn, pv](double x) {
    const double v = std::abs(fn(x));
    return pv == 1.0 ? v : std::pow(v, pv);
  };
  std::vector<double> edges{a};
  for (double bp : breakpoints) {
    if (bp > a && bp < b) edges.push_back(bp);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());

  // Absolute floor tied to the size of the integral so that kinks of |fn| at
  // sign changes do not stall the relative test.
  double scale = 0.0;
  const quad::GaussRule& rule = quad::gauss_legendre(20);
  for (int k = 0; k < 8; ++k) {
    const double hi = a + (b - a) * std::ldexp(1.0, -k);
    scale += quad::integrate_fixed(h, a + 0.5 * (hi - a), hi, rule);
  }
  quad::Tolerance tol = kNormTolerance;
  tol.abs = std::max(tol.abs, 1e-11 * std::abs(scale));

  bool tail_divergent = false;
  const auto tail = [&h, &tail_divergent](double eps) { return log_power_tail(h, eps, &tail_divergent); };
  const int levels = a > 0.0 ? 1100 : kNormLevels;
  const quad::DyadicResult inner = quad::integrate_dyadic(h, a, edges[1], tol, levels, tail);
  double total = inner.value;
  for (std::size_t i = 1; i + 1 < edges.size(); ++i) {
    total += quad::integrate_adaptive(h, edges[i], edges[i + 1], tol);
  }
  out.divergent = tail_divergent;
  if (a == 0.0 && !inner.level_contributions.empty()) {
    out.divergent = out.divergent || std::abs(inner.level_contributions.back()) > kDivergenceShare * total;
  }
  out.value = root(total, p);
  return out;
}

NormValue lp_norm(const RhsFunction& f, const LebesgueExponent& p) {
  if (f.is_zero()) return {};
  return lp_norm([&f](double x) { return f(x); }, p, 0.0, 1.0, f.breakpoints());
}

NormValue sampled_lp_norm(const SampleGrid& grid, const std::vector<double>& values,
                          const LebesgueExponent& p) {
  NormValue out;
  if (p.is_inf()) {
    for (double v : values) {
      if (std::isnan(v)) return {kNaN, false};
      out.value = std::max(out.value, std::abs(v));
    }
    return out;
  }
  const double pv = p.value();
  std::vector<double> h(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    h[i] = pv == 1.0 ? std::abs(values[i]) : std::pow(std::abs(values[i]), pv);
  }
  double total = grid.integral(h);
  const std::vector<double>& xs = grid.x();
  if (h.size() >= 2 && h[0] > 0.0 && h[1] > 0.0) {
    const double e = std::log(h[1] / h[0]) / std::log(xs[1] / xs[0]);
    if (e > -1.0) {
      const double lower = grid.lower();
      total += lower * h[0] * std::pow(lower / xs[0], e) / (1.0 + e);
    } else {
      out.divergent = true;
    }
  }
  out.divergent = out.divergent || innermost_octave(grid, h) > kDivergenceShare * total;
  out.value = root(total, p);
  return out;
}

NormValue combine_norms(const std::vector<NormValue>& parts, const LebesgueExponent& p) {
  NormValue out;
  double acc = 0.0;
  for (const NormValue& part : parts) {
    out.divergent = out.divergent || part.divergent;
    if (p.is_inf()) {
      acc = std::max(acc, part.value);
    } else {
      acc += std::pow(part.value, p.value());
    }
  }
  out.value = p.is_inf() ? acc : root(acc, p);
  return out;
}

double holder_seminorm(const std::function<double(double)>& u, double u_at_zero, double beta) {
  if (!(beta > 0.0) || beta > 1.0) throw DomainError("holder_seminorm: beta must lie in (0, 1]");
  const int n = kHolderPoints;
  std::vector<double> xa, ua, xb, ub;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const double x = t * t * t * t;
    if (i == 0) {
      if (!std::isfinite(u_at_zero)) continue;
      xa.push_back(0.0);
      ua.push_back(u_at_zero);
    } else {
      xa.push_back(x);
      ua.push_back(u(x));
    }
  }
  for (int j = 0; j < n; ++j) {
    const double t = (j + 0.5) / n;
    const double y = t * t * t * t;
    xb.push_back(y);
    ub.push_back(u(y));
  }
  double best = 0.0;
  for (std::size_t i = 0; i < xa.size(); ++i) {
    for (std::size_t j = 0; j < xb.size(); ++j) {
      const double d = std::abs(xa[i] - xb[j]);
      if (d == 0.0) continue;
      best = std::max(best, std::abs(ua[i] - ub[j]) / std::pow(d, beta));
    }
  }
  return best;
}

double holder_seminorm(const SampledSolution& solution, double beta) {
  return holder_seminorm(solution.value, solution.u_origin, beta);
}

double holder_exponent(double alpha) {
  if (alpha <= 0.0) return 0.5;
  if (alpha < 0.5) return 0.5 - alpha;
  return kNaN;
}

RegularityReport sobolev_norms(const SampledSolution& s, const RhsFunction& f, const LebesgueExponent& p) {
  RegularityReport r;
  r.alpha = s.alpha;
  r.bc = s.bc;
  r.p = p;
  r.rhs = f.name();
  r.engine = s.engine;

  const double a = s.alpha;
  const SampleGrid& grid = s.grid;
  const std::vector<double>& xs = grid.x();
  const std::size_t n = xs.size();
  std::vector<double> v(n), dv(n), wp(n), z(n), dz(n), d2z(n), sdu(n), d2u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = xs[i];
    wp[i] = s.u[i] - s.f[i];
    v[i] = std::pow(x, 2.0 * a - 1.0) * s.u[i];
    sdu[i] = s.flux[i] / x;
    d2u[i] = wp[i] - 2.0 * a * sdu[i];
    z[i] = std::pow(x, 2.0 * a) * s.u[i];
  }
  if (s.engine == SampledSolution::Engine::ClosedForm && s.bc == BoundaryKind::Dirichlet) {
    std::vector<double> k(n);
    for (std::size_t i = 0; i < n; ++i) k[i] = wp[i] * std::pow(xs[i], 1.0 - 2.0 * a);
    double tail = 0.0;
    if (n >= 2 && k[0] != 0.0 && k[1] != 0.0 && (k[0] > 0.0) == (k[1] > 0.0)) {
      const double e = std::max(std::log(k[1] / k[0]) / std::log(xs[1] / xs[0]), -0.999);
      tail = grid.lower() * k[0] * std::pow(grid.lower() / xs[0], e) / (1.0 + e);
    }
    const std::vector<double> acc = grid.cumulative(k, tail);
    for (std::size_t i = 0; i < n; ++i) dv[i] = std::pow(xs[i], 2.0 * a - 2.0) * acc[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      dv[i] = (2.0 * a - 1.0) * std::pow(xs[i], 2.0 * a - 2.0) * s.u[i] + sdu[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    dz[i] = 2.0 * a * v[i] + s.flux[i];
    d2z[i] = 2.0 * a * dv[i] + wp[i];
  }

  auto put = [&r](const std::string& key, const NormValue& nv) {
    r.norms[key] = nv.value;
    r.divergent[key] = nv.divergent;
  };
  auto norm = [&](const std::vector<double>& values) { return sampled_lp_norm(grid, values, p); };

  put("f_Lp", f.is_zero() ? NormValue{} : lp_norm(f, p));
  put("u_Lp", norm(s.u));
  put("flux_W1p", combine_norms({norm(s.flux), norm(wp)}, p));
  put("scaled_u_W1p", combine_norms({norm(v), norm(dv)}, p));
  put("weighted_u_W2p", combine_norms({norm(z), norm(dz), norm(d2z)}, p));
  put("scaled_du_Lp", norm(sdu));
  put("weighted_d2u_Lp", norm(d2u));
  put("u_W1p", combine_norms({norm(s.u), norm(s.du)}, p));
  const double beta = holder_exponent(a);
  if (std::isfinite(beta)) put("holder", NormValue{holder_seminorm(s, beta), false});

  const double fn = r.norms["f_Lp"];
  for (const auto& [key, value] : r.norms) {
    if (key == "f_Lp") continue;
    r.ratios[key] = fn > 0.0 ? value / fn : 0.0;
  }
  return r;
}

std::vector<std::string> asserted_quantities(double alpha, BoundaryKind bc, const LebesgueExponent& p) {
  std::vector<std::string> keys{"u_Lp", "flux_W1p"};
  if (bc == BoundaryKind::Dirichlet) {
    keys.insert(keys.end(), {"scaled_u_W1p", "weighted_u_W2p", "holder"});
  } else {
    if (p.is_inf() || p.value() > 1.0) keys.insert(keys.end(), {"scaled_du_Lp", "weighted_d2u_Lp"});
    if (alpha > 0.0 && alpha < 0.5) keys.push_back("holder");
    if (alpha <= 0.0) keys.push_back("u_W1p");
  }
  return keys;
}

RandomRhsFamily::RandomRhsFamily(LebesgueExponent p, std::uint64_t seed) : p_(p), seed_(seed) {}

RhsFunction RandomRhsFamily::draw(std::size_t index) const {
  return build_random(p_, seed_, index)
      .renamed("random:" + std::to_string(seed_) + ":" + std::to_string(index));
}

RhsFunction RandomRhsFamily::draw_normalized(std::size_t index) const {
  for (std::size_t attempt = 0;; ++attempt) {
    const RhsFunction f = build_random(p_, seed_ + attempt * 0x632BE59BD9B4E019ULL, index);
    const double norm = lp_norm(f, p_).value;
    if (norm > 1e-8 && std::isfinite(norm)) {
      return f.scaled(1.0 / norm).renamed("random:" + std::to_string(seed_) + ":" + std::to_string(index));
    }
  }
}

RatioStudy ratio_study(double alpha, BoundaryKind bc, const LebesgueExponent& p, int samples,
                       std::uint64_t seed) {
  RatioStudy study;
  study.alpha = alpha;
  study.bc = bc;
  study.p = p;
  study.seed = seed;
  study.samples = samples;
  study.asserted = asserted_quantities(alpha, bc, p);
  const AlphaParam param(alpha);
  const RandomRhsFamily family(p, seed);
  std::vector<RegularityReport> reports(static_cast<std::size_t>(samples));
  parallel_for(reports.size(), [&](std::size_t i) {
    const RhsFunction f = family.draw_normalized(i);
    const Solution sol = solve(BvpProblem(param, f, bc, p));
    reports[i] = sobolev_norms(sol.sampled(), f, p);
  });
  for (const std::string& key : study.asserted) {
    RatioSummary sum;
    std::vector<double> values;
    for (const RegularityReport& r : reports) {
      const double v = r.ratios.at(key);
      if (!std::isfinite(v)) sum.all_finite = false;
      if (r.divergent.at(key)) ++study.divergent_flags;
      values.push_back(v);
    }
    const Stats st = stats(values);
    sum.max = st.max;
    sum.median = st.median;
    sum.bounded = sum.all_finite && st.max <= 10.0 * st.median;
    study.pass = study.pass && sum.all_finite && sum.bounded;
    study.summary[key] = sum;
  }
  study.pass = study.pass && study.divergent_flags == 0;
  return study;
}

std::vector<double> decade_points(int kmin, int kmax) {
  std::vector<double> out;
  for (int k = kmin; k <= kmax; ++k) out.push_back(std::pow(10.0, -k));
  return out;
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(xs[i]);
    my += std::log(std::abs(ys[i]));
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxy += dx * (std::log(std::abs(ys[i])) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double Profile::envelope_spread() const {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const ProfileRow& row : rows) {
    lo = std::min(lo, row.upper_envelope);
    hi = std::max(hi, row.upper_envelope);
  }
  return hi / lo;
}

Profile kd_profile(double alpha, const LebesgueExponent& p, const std::vector<double>& xs, int samples,
                   std::uint64_t seed) {
  const AlphaParam param(alpha);
  if (alpha >= 0.5) throw DomainError("kd_profile: requires alpha < 1/2");
  Profile prof;
  prof.alpha = alpha;
  prof.p = p;
  prof.seed = seed;
  prof.samples = samples;
  const Solution one = solve(BvpProblem(param, rhs::constant(1.0), BoundaryKind::Dirichlet, p));
  prof.reference = dirichlet_origin_coefficient(one);
  auto probe = [alpha](const Solution& s, double x) { return std::abs(std::pow(x, 2.0 * alpha - 1.0) * s.value(x)); };
  for (double x : xs) prof.rows.push_back({x, probe(one, x), 0.0});

  const RandomRhsFamily family(p, seed);
  std::vector<std::vector<double>> values(static_cast<std::size_t>(samples));
  parallel_for(values.size(), [&](std::size_t j) {
    const Solution s = solve(BvpProblem(param, family.draw_normalized(j), BoundaryKind::Dirichlet, p));
    for (double x : xs) values[j].push_back(probe(s, x));
  });
  for (const std::vector<double>& v : values) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      prof.rows[i].upper_envelope = std::max(prof.rows[i].upper_envelope, v[i]);
    }
  }
  return prof;
}

Profile kn_profile(double alpha, const LebesgueExponent& p, const std::vector<double>& xs, int samples,
                   std::uint64_t seed) {
  const AlphaParam param(alpha);
  Profile prof;
  prof.alpha = alpha;
  prof.p = p;
  prof.seed = seed;
  prof.samples = samples;
  prof.reference = kNaN;
  const double weight = p.reciprocal() - 1.0;
  auto probe = [weight](const Solution& s, double x) { return std::abs(std::pow(x, weight) * s.flux(x)); };

  prof.rows.resize(xs.size());
  if (p.is_inf()) {
    const Solution one = solve(BvpProblem(param, rhs::constant(1.0), BoundaryKind::Neumann, p));
    const FundamentalPair& pair = one.pair();
    const double coeff = -1.0 / pair.phi_minus(1.0);
    prof.reference = std::abs(coeff * (2.0 - 2.0 * alpha) * pair.b2());
    for (std::size_t i = 0; i < xs.size(); ++i) prof.rows[i] = {xs[i], probe(one, xs[i]), 0.0};
  } else {
    parallel_for(xs.size(), [&](std::size_t i) {
      const Solution s = solve(BvpProblem(param, rhs::extremal_step(xs[i], p), BoundaryKind::Neumann, p));
      prof.rows[i] = {xs[i], probe(s, xs[i]), 0.0};
    });
  }

  const RandomRhsFamily family(p, seed);
  std::vector<std::vector<double>> values(static_cast<std::size_t>(samples));
  parallel_for(values.size(), [&](std::size_t j) {
    const Solution s = solve(BvpProblem(param, family.draw_normalized(j), BoundaryKind::Neumann, p));
    for (double x : xs) values[j].push_back(probe(s, x));
  });
  for (const std::vector<double>& v : values) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      prof.rows[i].upper_envelope = std::max(prof.rows[i].upper_envelope, v[i]);
    }
  }
  return prof;
}

CounterexampleScan counterexample_scan(double alpha, const std::vector<double>& deltas, const RhsFunction& f) {
  CounterexampleScan scan;
  scan.alpha = alpha;
  scan.rhs = f.name();
  const LebesgueExponent p1(1.0);
  const Solution sol = solve(BvpProblem(AlphaParam(alpha), f, BoundaryKind::Neumann, p1));
  const auto h = [&sol](double x) { return std::abs(sol.flux(x) / x); };
  const quad::Tolerance tol{1e-14, 1e-10, 40};
  for (double delta : deltas) {
    if (!(delta > 0.0) || !(delta < 0.5)) throw DomainError("counterexample_scan: delta must lie in (0, 1/2)");
    scan.rows.push_back({delta, quad::integrate_dyadic(h, delta, 0.5, tol, 200).value});
  }
  scan.f_l1 = lp_norm(f, p1).value;

  const std::size_t n = scan.rows.size();
  if (n >= 2) {
    double mx = 0.0, my = 0.0;
    for (const ScanRow& r : scan.rows) {
      mx += 2.0 * std::sqrt(1.0 - std::log(r.delta));
      my += r.integral;
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (const ScanRow& r : scan.rows) {
      const double dx = 2.0 * std::sqrt(1.0 - std::log(r.delta)) - mx;
      sxy += dx * (r.integral - my);
      sxx += dx * dx;
    }
    scan.slope = sxy / sxx;
    scan.intercept = my - scan.slope * mx;
  }
  return scan;
}

BumpProbe bump_probe(double alpha, double a_large, double a_small) {
  if (alpha >= 0.5) throw DomainError("bump_probe: requires alpha < 1/2");
  const AlphaParam param(alpha);
  const std::vector<std::pair<double, double>> supports{{0.2, 0.6}, {0.3, 0.8}, {0.1, 0.5}, {0.5, 0.9}};
  for (const auto& [lo, hi] : supports) {
    const RhsFunction f = rhs::bump(lo, hi);
    const Solution sol = solve(BvpProblem(param, f, BoundaryKind::Dirichlet, LebesgueExponent(1.0)));
    if (std::abs(sol.A()) < 1e-8) continue;
    BumpProbe out;
    out.rhs = f.name();
    out.coefficient = sol.A();
    const auto h = [&sol](double x) { return sol.flux(x) / x; };
    const LebesgueExponent p1(1.0);
    out.norm_large = lp_norm(h, p1, a_large, 0.1).value;
    out.norm_small = lp_norm(h, p1, a_small, 0.1).value;
    out.growth = out.norm_small / out.norm_large;
    return out;
  }
  throw DomainError("bump_probe: no bump with a nonzero flux-carrying component");
}

}  // namespace singular_sl
