#include <algorithm>
#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "singular_sl/closed_form_solver.hpp"
#include "singular_sl/weighted_analysis.hpp"

namespace {

using namespace singular_sl;

const LebesgueExponent kInf = LebesgueExponent::inf();

SampledSolution sampled(double alpha, const RhsFunction& f, BoundaryKind bc) {
  return solve(BvpProblem(AlphaParam(alpha), f, bc)).sampled();
}

TEST(LpNorm, Examples) {
  EXPECT_NEAR(lp_norm(rhs::constant(1.0), LebesgueExponent(1.0)).value, 1.0, 1e-10);
  EXPECT_NEAR(lp_norm(rhs::constant(1.0), kInf).value, 1.0, 1e-14);
  const NormValue root = lp_norm([](double x) { return std::pow(x, -0.5); }, LebesgueExponent(1.0));
  EXPECT_NEAR(root.value, 2.0, 1e-6);
  EXPECT_FALSE(root.divergent);
  EXPECT_NEAR(lp_norm([](double x) { return 1.0 - x; }, LebesgueExponent(2.0)).value, std::sqrt(1.0 / 3.0), 1e-10);
}

TEST(LpNorm, LogarithmicRhs) {
  const NormValue l1 = lp_norm(rhs::counterexample(), LebesgueExponent(1.0));
  EXPECT_NEAR(l1.value, 2.0, 1e-3);
  EXPECT_FALSE(l1.divergent);
  const NormValue l2 = lp_norm(rhs::counterexample(), LebesgueExponent(2.0));
  EXPECT_TRUE(l2.divergent || !std::isfinite(l2.value));
}

TEST(LpNorm, Breakpoints) {
  const RhsFunction step = rhs::extremal_step(0.01, LebesgueExponent(2.0));
  EXPECT_NEAR(lp_norm(step, LebesgueExponent(2.0)).value, 1.0, 1e-8);
}

TEST(LpNorm, CombineNorms) {
  const NormValue a{3.0, false};
  const NormValue b{4.0, false};
  EXPECT_NEAR(combine_norms({a, b}, LebesgueExponent(2.0)).value, 5.0, 1e-14);
  EXPECT_NEAR(combine_norms({a, b}, LebesgueExponent(1.0)).value, 7.0, 1e-14);
  EXPECT_NEAR(combine_norms({a, b}, kInf).value, 4.0, 1e-14);
}

TEST(LpNorm, LogPowerTail) {
  bool divergent = true;
  const double tail = log_power_tail([](double x) { return std::pow(x, -0.5); }, 1e-4, &divergent);
  EXPECT_FALSE(divergent);
  EXPECT_NEAR(tail, 2.0 * std::sqrt(1e-4), 1e-8);
  log_power_tail([](double x) { return 1.0 / x; }, 1e-4, &divergent);
  EXPECT_TRUE(divergent);
}

TEST(SampledLpNorm, MatchesQuadrature) {
  const SampledSolution s = sampled(0.25, rhs::manufactured_neumann(0.25), BoundaryKind::Neumann);
  EXPECT_NEAR(sampled_lp_norm(s.grid, s.u, LebesgueExponent(2.0)).value, std::sqrt(1.0 / 3.0), 1e-4);
  EXPECT_NEAR(sampled_lp_norm(s.grid, s.u, kInf).value, 1.0, 1e-4);
}

TEST(SobolevNorms, ZeroRhs) {
  const SampledSolution s = sampled(0.25, rhs::zero(), BoundaryKind::Dirichlet);
  const RegularityReport r = sobolev_norms(s, rhs::zero(), LebesgueExponent(2.0));
  for (const auto& [key, value] : r.norms) EXPECT_NEAR(value, 0.0, 1e-12) << key;
  for (const auto& [key, value] : r.ratios) EXPECT_EQ(value, 0.0) << key;
}

TEST(SobolevNorms, ManufacturedNeumann) {
  // u = 1 - x at weight exponent 1: flux -x, f = 2 - x.
  const RhsFunction f = rhs::manufactured_neumann(0.5);
  const RegularityReport r = sobolev_norms(sampled(0.5, f, BoundaryKind::Neumann), f, LebesgueExponent(2.0));
  EXPECT_NEAR(r.norms.at("f_Lp"), std::sqrt(7.0 / 3.0), 1e-4);
  EXPECT_NEAR(r.norms.at("u_Lp"), std::sqrt(1.0 / 3.0), 1e-4);
  EXPECT_NEAR(r.norms.at("flux_W1p"), std::sqrt(1.0 / 3.0 + 1.0), 1e-4);
  EXPECT_NEAR(r.norms.at("u_W1p"), std::sqrt(1.0 / 3.0 + 1.0), 1e-4);
  EXPECT_NEAR(r.ratios.at("u_Lp"), std::sqrt(1.0 / 7.0), 1e-4);
}

TEST(SobolevNorms, ManufacturedDirichlet) {
  // x^(2a-1) u = 1 - x.
  const double alpha = 0.25;
  const RhsFunction f = rhs::manufactured_dirichlet(alpha);
  const RegularityReport r = sobolev_norms(sampled(alpha, f, BoundaryKind::Dirichlet), f, LebesgueExponent(2.0));
  EXPECT_NEAR(r.norms.at("scaled_u_W1p"), std::sqrt(1.0 / 3.0 + 1.0), 1e-4);
  const double u_l2 = std::sqrt(oracle::integral(
      [](double x) { return std::pow(std::sqrt(x) - std::pow(x, 1.5), 2); }, 0.0, 1.0));
  EXPECT_NEAR(r.norms.at("u_Lp"), u_l2, 1e-4);
  EXPECT_TRUE(r.norms.count("holder"));
}

TEST(SobolevNorms, AssertedQuantities) {
  const auto d = asserted_quantities(0.25, BoundaryKind::Dirichlet, LebesgueExponent(2.0));
  EXPECT_NE(std::find(d.begin(), d.end(), "scaled_u_W1p"), d.end());
  EXPECT_NE(std::find(d.begin(), d.end(), "holder"), d.end());
  const auto n = asserted_quantities(0.75, BoundaryKind::Neumann, LebesgueExponent(2.0));
  EXPECT_NE(std::find(n.begin(), n.end(), "u_Lp"), n.end());
  EXPECT_EQ(std::find(n.begin(), n.end(), "holder"), n.end());
}

TEST(Holder, Examples) {
  EXPECT_NEAR(holder_seminorm([](double) { return 3.0; }, 3.0, 0.5), 0.0, 1e-15);
  EXPECT_NEAR(holder_seminorm([](double x) { return std::sqrt(x); }, 0.0, 0.5), 1.0, 1e-9);
  const double ratio = holder_seminorm(sampled(0.25, rhs::constant(1.0), BoundaryKind::Dirichlet), 0.25);
  EXPECT_GT(ratio, 0.0);
  EXPECT_LT(ratio, 100.0);
}

TEST(Holder, Exponent) {
  EXPECT_NEAR(holder_exponent(0.25), 0.25, 1e-15);
  EXPECT_NEAR(holder_exponent(-1.0), 0.5, 1e-15);
  EXPECT_TRUE(std::isnan(holder_exponent(0.6)));
}

TEST(RandomRhsFamily, Deterministic) {
  const RandomRhsFamily a(LebesgueExponent(2.0), 42);
  const RandomRhsFamily b(LebesgueExponent(2.0), 42);
  const RandomRhsFamily c(LebesgueExponent(2.0), 43);
  bool differs = false;
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(a.draw(i).name(), b.draw(i).name());
    EXPECT_EQ(a.draw(i)(0.37), b.draw(i)(0.37));
    differs = differs || a.draw(i)(0.37) != c.draw(i)(0.37);
  }
  EXPECT_TRUE(differs);
}

TEST(RandomRhsFamily, Normalized) {
  for (const LebesgueExponent& p : {LebesgueExponent(1.0), LebesgueExponent(2.0), kInf}) {
    const RandomRhsFamily fam(p, 7);
    for (std::size_t i = 0; i < 10; ++i) {
      const RhsFunction f = fam.draw_normalized(i);
      EXPECT_TRUE(f.in_lp(p));
      EXPECT_NEAR(lp_norm(f, p).value, 1.0, 1e-6) << f.name() << " p=" << p.to_string();
    }
  }
}

TEST(RatioStudy, SmallStudyPasses) {
  const RatioStudy d = ratio_study(0.25, BoundaryKind::Dirichlet, LebesgueExponent(2.0), 10, 11);
  EXPECT_TRUE(d.pass);
  EXPECT_EQ(d.samples, 10);
  for (const std::string& key : d.asserted) {
    EXPECT_TRUE(d.summary.at(key).all_finite) << key;
    EXPECT_TRUE(d.summary.at(key).bounded) << key;
  }
  const RatioStudy n = ratio_study(0.75, BoundaryKind::Neumann, LebesgueExponent(1.0), 10, 11);
  EXPECT_TRUE(n.pass);
}

TEST(Helpers, DecadesAndSlope) {
  const auto xs = decade_points(1, 4);
  ASSERT_EQ(xs.size(), 4u);
  EXPECT_NEAR(xs[0], 0.1, 1e-17);
  EXPECT_NEAR(xs[3], 1e-4, 1e-20);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(-3.0 * std::pow(x, 0.7));
  EXPECT_NEAR(loglog_slope(xs, ys), 0.7, 1e-12);
}

TEST(Profiles, DirichletConstant) {
  const Profile kd = kd_profile(0.25, LebesgueExponent(2.0), decade_points(1, 5), 10, 5);
  ASSERT_EQ(kd.rows.size(), 5u);
  const double reference = std::abs(kd.reference);
  EXPECT_GT(reference, 0.0);
  EXPECT_LE(std::abs(kd.rows.back().lower_bound - reference), 0.05 * reference);
  EXPECT_LE(kd.envelope_spread(), 3.0);
  for (const ProfileRow& row : kd.rows) EXPECT_GT(row.upper_envelope, 0.0);
}

TEST(Profiles, NeumannConstant) {
  const Profile kn = kn_profile(0.6, LebesgueExponent(2.0), decade_points(1, 5), 10, 5);
  ASSERT_EQ(kn.rows.size(), 5u);
  EXPECT_TRUE(std::isnan(kn.reference));
  for (const ProfileRow& row : kn.rows) {
    if (row.x <= 1e-3) {
      EXPECT_GE(row.lower_bound, 0.5) << "x=" << row.x;
    }
  }
  EXPECT_LE(kn.envelope_spread(), 3.0);
  const Profile inf = kn_profile(0.6, kInf, decade_points(1, 5), 10, 5);
  EXPECT_GT(inf.reference, 0.0);
}

TEST(Counterexample, LogarithmicGrowth) {
  const CounterexampleScan scan = counterexample_scan(0.6, decade_points(2, 8));
  EXPECT_NEAR(scan.f_l1, 2.0, 1e-3);
  ASSERT_EQ(scan.rows.size(), 7u);
  for (std::size_t i = 1; i < scan.rows.size(); ++i) EXPECT_GT(scan.rows[i].integral, scan.rows[i - 1].integral);
  // Growth against 2 (1 - ln d)^(1/2) is linear with a positive slope.
  EXPECT_GT(scan.slope, 0.5);
}

TEST(Counterexample, SmoothRhsConverges) {
  const CounterexampleScan scan = counterexample_scan(0.6, {1e-6, 1e-8}, rhs::constant(1.0));
  EXPECT_LT(std::abs(scan.rows[1].integral - scan.rows[0].integral), 1e-3);
}

TEST(BumpProbe, Growth) {
  for (double alpha : {-0.25, 0.25}) {
    const BumpProbe probe = bump_probe(alpha);
    EXPECT_NE(probe.coefficient, 0.0);
    EXPECT_GE(probe.growth, 1.5) << "alpha=" << alpha;
  }
}

}  // namespace
