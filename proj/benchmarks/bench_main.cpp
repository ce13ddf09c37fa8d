#include <benchmark/benchmark.h>

#include "efrac/arith.hpp"
#include "efrac/census.hpp"
#include "efrac/solubility.hpp"

namespace {

void BM_SpfBuild(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    efrac::SpfTable table(limit);
    benchmark::DoNotOptimize(table.entries().data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * limit));
}
BENCHMARK(BM_SpfBuild)->Arg(1 << 20)->Arg(1 << 24)->Unit(benchmark::kMillisecond);

void BM_SegmentedFill(benchmark::State& state) {
  const efrac::SegmentedFactorizer factorizer(100'000'000);
  efrac::FactorBlock block;
  const std::uint64_t lo = 50'000'000, size = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    factorizer.fill(lo, lo + size, block);
    benchmark::DoNotOptimize(block.size());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * size));
}
BENCHMARK(BM_SegmentedFill)->Arg(1 << 14)->Arg(1 << 16)->Arg(1 << 18);

void BM_Census(benchmark::State& state) {
  const auto a = static_cast<std::uint64_t>(state.range(0));
  const auto limit = static_cast<std::uint64_t>(state.range(1));
  efrac::CensusOptions options;
  options.checkpoints = {limit};
  for (auto _ : state) {
    const auto series = efrac::run_census(a, limit, options);
    benchmark::DoNotOptimize(series.checkpoints.back().e);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * limit));
}
BENCHMARK(BM_Census)->Args({5, 1'000'000})->Args({13, 1'000'000})->Args({5, 10'000'000})->Unit(benchmark::kMillisecond);

void BM_IsExceptional(benchmark::State& state) {
  const auto a = static_cast<std::uint64_t>(state.range(0));
  const efrac::SpfTable table(1 << 20);
  std::uint64_t n = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(efrac::is_exceptional(n, a, table));
    n = n % (1 << 20) + 1;
  }
}
BENCHMARK(BM_IsExceptional)->Arg(5)->Arg(105)->Arg(9240);

void BM_FindWitness(benchmark::State& state) {
  const auto a = static_cast<std::uint64_t>(state.range(0));
  const efrac::SpfTable table(1 << 20);
  std::uint64_t n = 1;
  for (auto _ : state) {
    if (efrac::gcd_u64(n, a) == 1) benchmark::DoNotOptimize(efrac::find_witness(efrac::factorize(n, table), a).status);
    n = n % (1 << 20) + 1;
  }
}
BENCHMARK(BM_FindWitness)->Arg(5)->Arg(105);

}  // namespace

BENCHMARK_MAIN();
