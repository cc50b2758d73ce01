#include <benchmark/benchmark.h>

#include "singular_sl/closed_form_solver.hpp"
#include "singular_sl/galerkin_solver.hpp"
#include "singular_sl/homogeneous_basis.hpp"
#include "singular_sl/special_functions.hpp"
#include "singular_sl/weighted_analysis.hpp"

namespace {

using namespace singular_sl;

void BM_BesselI(benchmark::State& state) {
  const special::BesselOrder order(1.0 / 3.0);
  double y = 0.0;
  for (auto _ : state) {
    y = y < 5.0 ? y + 0.01 : 0.01;
    benchmark::DoNotOptimize(special::bessel_i(order, y).value);
  }
}
BENCHMARK(BM_BesselI);

void BM_BesselK(benchmark::State& state) {
  double y = 0.0;
  for (auto _ : state) {
    y = y < 5.0 ? y + 0.01 : 0.01;
    benchmark::DoNotOptimize(special::bessel_k_int(1, y).value);
  }
}
BENCHMARK(BM_BesselK);

void BM_FundamentalPair(benchmark::State& state) {
  const double alpha = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(make_pair(AlphaParam(alpha)).wronskian());
}
BENCHMARK(BM_FundamentalPair)->Arg(-100)->Arg(25)->Arg(75);

void BM_ClosedFormSolve(benchmark::State& state) {
  const double alpha = static_cast<double>(state.range(0)) / 100.0;
  const BoundaryKind bc = alpha < 0.5 ? BoundaryKind::Dirichlet : BoundaryKind::Neumann;
  const BvpProblem pb(AlphaParam(alpha), rhs::polynomial({1.0, -1.0, 2.0}), bc);
  for (auto _ : state) benchmark::DoNotOptimize(solve(pb).A());
}
BENCHMARK(BM_ClosedFormSolve)->Arg(-100)->Arg(25)->Arg(75)->Unit(benchmark::kMillisecond);

void BM_Galerkin(benchmark::State& state) {
  const BvpProblem pb(AlphaParam(0.25), rhs::constant(1.0), BoundaryKind::Dirichlet);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_galerkin(pb, n).nodal.back());
  state.SetComplexityN(n);
}
BENCHMARK(BM_Galerkin)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oN);

void BM_SobolevNorms(benchmark::State& state) {
  const RhsFunction f = rhs::power(0.25);
  const SampledSolution s = solve(BvpProblem(AlphaParam(0.25), f, BoundaryKind::Dirichlet)).sampled();
  for (auto _ : state) benchmark::DoNotOptimize(sobolev_norms(s, f, LebesgueExponent(2.0)).norms.size());
}
BENCHMARK(BM_SobolevNorms)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
