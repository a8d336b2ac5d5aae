#include <benchmark/benchmark.h>

#include "orbitlab/equidistribution.hpp"
#include "orbitlab/expr.hpp"

namespace {

using namespace orbitlab;

void BM_SampleSequence(benchmark::State& state) {
  const RealExpr f = RealExpr::parse("frac(sqrt2*n)");
  const auto N = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_sequence(f, N));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleSequence)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_StarDiscrepancy(benchmark::State& state) {
  const PointSample s = sample_sequence(RealExpr::parse("frac(sqrt2*n)"), static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(star_discrepancy(s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StarDiscrepancy)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
