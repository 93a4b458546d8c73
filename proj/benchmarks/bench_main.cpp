#include <benchmark/benchmark.h>

#include "fusegain/dimension.hpp"
#include "fusegain/gain.hpp"
#include "fusegain/model.hpp"
#include "fusegain/optimize.hpp"
#include "fusegain/rng.hpp"
#include "fusegain/waterfill.hpp"

namespace {

using namespace fusegain;

TwoChannelSystem square_system(int n) {
  return gen_random_system(99, RandomDims{n, n, n, n},
                           ConditionalKind::Identity);
}

Matrix bench_channel(int t, int q) {
  Rng rng(7);
  Matrix g(t, q);
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < q; ++j) g(i, j) = rng.gaussian();
  return g;
}

void bm_information_gain(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const TwoChannelSystem sys = square_system(n);
  const DerivedQuantities d = derive(sys);
  const Matrix g = bench_channel(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(information_gain(g, d));
}
BENCHMARK(bm_information_gain)->Arg(5)->Arg(10)->Arg(20)->Arg(40);

void bm_gradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const TwoChannelSystem sys = square_system(n);
  const DerivedQuantities d = derive(sys);
  const Matrix g = bench_channel(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(gradient(g, d));
}
BENCHMARK(bm_gradient)->Arg(5)->Arg(10)->Arg(20)->Arg(40);

void bm_analytic_design(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const TwoChannelSystem sys = square_system(n);
  const DerivedQuantities d = derive(sys);
  for (auto _ : state) benchmark::DoNotOptimize(analytic_design(sys, d));
}
BENCHMARK(bm_analytic_design)->Arg(5)->Arg(10)->Arg(20)->Arg(40);

void bm_intrinsic_line_search_run(benchmark::State& state) {
  const TwoChannelSystem sys = gen_ar_system(0.5);
  const DerivedQuantities d = derive(sys);
  OptimConfig config;
  config.seed = 5;
  config.step_mode = StepMode::LineSearch;
  for (auto _ : state)
    benchmark::DoNotOptimize(run(sys, d, Algorithm::Intrinsic, config));
}
BENCHMARK(bm_intrinsic_line_search_run);

void bm_extrinsic_run(benchmark::State& state) {
  const TwoChannelSystem sys = gen_ar_system(0.5);
  const DerivedQuantities d = derive(sys);
  OptimConfig config;
  config.seed = 5;
  for (auto _ : state)
    benchmark::DoNotOptimize(run(sys, d, Algorithm::Extrinsic, config));
}
BENCHMARK(bm_extrinsic_run);

void bm_dimension_sweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const TwoChannelSystem sys = gen_random_system(
      99, RandomDims{n / 2, n, n / 2, n}, ConditionalKind::Identity);
  for (auto _ : state)
    benchmark::DoNotOptimize(dimension_sweep(sys, SweepSolver::Analytic));
}
BENCHMARK(bm_dimension_sweep)->Arg(10)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
