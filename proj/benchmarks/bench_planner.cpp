#include <benchmark/benchmark.h>

#include "edgeckpt/chain.hpp"
#include "edgeckpt/planner.hpp"
#include "edgeckpt/revolve.hpp"
#include "edgeckpt/tables.hpp"
#include "edgeckpt/uniform.hpp"

namespace {

using namespace edgeckpt;

void BM_DpTable(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  for (auto _ : state) {
    DpTable table(l, l - 1);
    benchmark::DoNotOptimize(table.min_advances(l, 1));
  }
  state.SetComplexityN(l);
}
BENCHMARK(BM_DpTable)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_ClosedForm(benchmark::State& state) {
  for (auto _ : state) {
    std::int64_t sum = 0;
    for (int c = 1; c <= 20; ++c) sum += closed_form_advances(10000, c);
    benchmark::DoNotOptimize(sum);
  }
}
BENCHMARK(BM_ClosedForm);

void BM_BruteForce(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_force_min_advances(l, 3));
  }
}
BENCHMARK(BM_BruteForce)->DenseRange(6, kBruteForceMaxLength, 2);

void BM_RevolveEmitAndReplay(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const int c = static_cast<int>(state.range(1));
  const DpTable table(l, c);
  for (auto _ : state) {
    const auto stats = execute(revolve_schedule(table, l, c));
    benchmark::DoNotOptimize(stats.advances);
  }
}
BENCHMARK(BM_RevolveEmitAndReplay)->Args({152, 4})->Args({152, 8})->Args({152, 16})
    ->Args({1000, 10});

void BM_UniformEmitAndReplay(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const auto plan = uniform_min_memory(l);
  for (auto _ : state) {
    const auto stats = execute(uniform_schedule(l, plan.segments));
    benchmark::DoNotOptimize(stats.peak_live);
  }
}
BENCHMARK(BM_UniformEmitAndReplay)->Arg(152)->Arg(1000);

void BM_ChainProfile(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  for (auto _ : state) {
    ChainProfile profile(l);
    benchmark::DoNotOptimize(profile.peak_live(1));
  }
}
BENCHMARK(BM_ChainProfile)->Arg(18)->Arg(50)->Arg(152);

void BM_SweepAllVariants(benchmark::State& state) {
  SweepConfig config;
  config.variants = builtin_params();
  config.batch = 8;
  config.image = 500;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep(config));
  }
}
BENCHMARK(BM_SweepAllVariants)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
