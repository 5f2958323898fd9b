#include <benchmark/benchmark.h>

#include "poisson/exact.hpp"
#include "poisson/monte_carlo.hpp"
#include "poisson/registry.hpp"

namespace {

using namespace poisson;
namespace reg = poisson::registry;

GroundSpace space_for(int sites) {
  std::vector<double> w;
  for (int i = 0; i < sites; ++i) w.push_back(0.5 + 0.5 * i);
  return GroundSpace(std::move(w));
}

void BM_BuildStateTable(benchmark::State& state) {
  const GroundSpace space = space_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_state_table(space, 1e-12, 50'000'000).size());
}
BENCHMARK(BM_BuildStateTable)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ExactExpectation(benchmark::State& state) {
  const GroundSpace space = space_for(static_cast<int>(state.range(0)));
  const StateTable table = build_state_table(space, 1e-12, 50'000'000);
  const Functional F = reg::bounded_sigmoid(SiteSet::all(space.size()), 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(exact_expectation(F, table).value);
  state.SetItemsProcessed(state.iterations() * static_cast<long>(table.size()));
}
BENCHMARK(BM_ExactExpectation)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_McExpectation(benchmark::State& state) {
  const GroundSpace space = space_for(3);
  const Functional F = reg::bounded_sigmoid(SiteSet::all(3), 0.7);
  const SamplerConfig cfg{1, static_cast<std::size_t>(state.range(0)), 1};
  for (auto _ : state) benchmark::DoNotOptimize(mc_expectation(F, space, cfg).mean);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McExpectation)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_PseudoInverse(benchmark::State& state) {
  const GroundSpace space = space_for(static_cast<int>(state.range(0)));
  const StateTable table = build_state_table(space, 1e-12, 50'000'000);
  const Functional F = reg::indicator_leq(SiteSet::all(space.size()), 3);
  for (auto _ : state) benchmark::DoNotOptimize(ou_pseudo_inverse(F, table, 1e-8).residual);
  state.counters["states"] = static_cast<double>(table.size());
}
BENCHMARK(BM_PseudoInverse)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
