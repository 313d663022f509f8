// Serial reference driver versus the OpenMP driver on the same fleets.
//
//   ./build/bench/bench_fleet_sim --benchmark_counters_tabular=true
//
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "tclflex/fleet_sim.hpp"
#include "tclflex/protocol.hpp"

namespace {

using namespace tclflex;

const ApplianceParams kParams = ApplianceParams::from_band(1.0, 0.4, 1.0, 1.0);

SimOptions indiv_options() {
  SimOptions o;
  o.horizon = 7.0;
  o.message = plan({RequestKind::reduce, 0.35, std::nullopt}, kParams, 1400, PlanMode::longest,
                   SchemePreference::indiv);
  return o;
}

template <SimRun (*Driver)(std::span<const CyclePhase>, const ApplianceParams&, const SimOptions&)>
void BM_Simulate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto fleet = build_fleet({kParams, n, Sampling::stratified, 1});
  const auto options = indiv_options();
  std::size_t events = 0;
  for (auto _ : state) {
    auto run = Driver(fleet, kParams, options);
    events = run.stats.events;
    benchmark::DoNotOptimize(run.trace.size());
  }
  state.counters["appliances/s"] =
      benchmark::Counter(static_cast<double>(n), benchmark::Counter::kIsIterationInvariantRate);
  state.counters["events"] = static_cast<double>(events);
}

void BM_Serial(benchmark::State& state) { BM_Simulate<&simulate_serial>(state); }
void BM_OpenMP(benchmark::State& state) { BM_Simulate<&simulate>(state); }

BENCHMARK(BM_Serial)->RangeMultiplier(10)->Range(1'000, 1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OpenMP)->RangeMultiplier(10)->Range(1'000, 1'000'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
