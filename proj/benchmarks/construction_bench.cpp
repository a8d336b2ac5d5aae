#include <benchmark/benchmark.h>

#include "orbitlab/constructions.hpp"

namespace {

using namespace orbitlab;

void BM_Prop41Assemble(benchmark::State& state) {
  const auto horizon = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(prop41_assemble(GeometricDescriptor{}, std::nullopt, horizon));
}
BENCHMARK(BM_Prop41Assemble)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_Prop41Certify(benchmark::State& state) {
  const Bundle b = prop41_assemble(GeometricDescriptor{}, std::nullopt, static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(b.certify());
}
BENCHMARK(BM_Prop41Certify)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace
