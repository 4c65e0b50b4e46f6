#include <benchmark/benchmark.h>

#include "dncsf/analysis.hpp"
#include "dncsf/barriers.hpp"
#include "dncsf/flow.hpp"
#include "dncsf/geometry.hpp"
#include "dncsf/hairclip.hpp"

using namespace dncsf;

static void BM_CurvatureProfile(benchmark::State& st) {
  const Curve c = initial_curve(0.3, 0.5, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(curvature_profile(c));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_CurvatureProfile)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oN);

static void BM_FlowStep(benchmark::State& st) {
  const Curve c = initial_curve(0.3, 0.5, static_cast<std::size_t>(st.range(0)));
  const FlowState s = FlowState::at(c, 0.0);
  const double h = min_spacing(c);
  for (auto _ : st) benchmark::DoNotOptimize(step(s, 0.25 * h * h));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_FlowStep)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oN);

static void BM_ThetaMinus(benchmark::State& st) {
  const ProblemConfig cfg(0.5);
  double t = -10.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(theta_minus(cfg, t));
    t = t > 2.0 ? -10.0 : t + 0.01;
  }
}
BENCHMARK(BM_ThetaMinus);

static void BM_OrthogonalPair(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(solve_orthogonal_pair(0.3, 0.5));
}
BENCHMARK(BM_OrthogonalPair);

static void BM_Lambda0(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(lambda0(0.5));
}
BENCHMARK(BM_Lambda0);

static void BM_BarrierInequality(benchmark::State& st) {
  const ProblemConfig cfg(0.7);
  for (auto _ : st) benchmark::DoNotOptimize(verify_barrier_inequality(cfg, ArcKind::DirichletNeumann, -1.0, 256));
}
BENCHMARK(BM_BarrierInequality);

static void BM_RunToConvergence(benchmark::State& st) {
  for (auto _ : st) {
    FlowRunConfig cfg(0.5, initial_curve(0.3, 0.5, 32));
    cfg.nodes = 32;
    cfg.record_every = 10;
    benchmark::DoNotOptimize(run(cfg));
  }
}
BENCHMARK(BM_RunToConvergence)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
