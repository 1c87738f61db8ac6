#include <benchmark/benchmark.h>

#include "scenefuzz/errors.hpp"
#include "scenefuzz/fuzzer.hpp"
#include "scenefuzz/mutation.hpp"
#include "scenefuzz/simulator.hpp"

using namespace scenefuzz;

namespace {

Scenario busy_scenario() {
  const MapSpec& map = map_by_id("two_lane");
  auto seeds = make_initial_seeds(map, 1, 99);
  Scenario s = seeds.front();
  Rng rng(5);
  while (s.obstacles.size() < 10) {
    try {
      s = mutate(s, map, MutationKind::add, rng);
    } catch (const MutationError&) {
      break;
    }
  }
  return s;
}

void BM_SimulateRound(benchmark::State& state) {
  const MapSpec& map = map_by_id("two_lane");
  Scenario s = busy_scenario();
  DetectorStack stack = DetectorStack::plain(DetectorProfile{});
  SimParams params;
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_round(s, map, stack, 5.0, params));
}
BENCHMARK(BM_SimulateRound);

void BM_SimulateRoundTracked(benchmark::State& state) {
  const MapSpec& map = map_by_id("two_lane");
  Scenario s = busy_scenario();
  DetectorStack stack = DetectorStack::with_tracker(DetectorProfile{});
  SimParams params;
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_round(s, map, stack, 5.0, params));
}
BENCHMARK(BM_SimulateRoundTracked);

void BM_Mutate(benchmark::State& state) {
  const MapSpec& map = map_by_id("two_lane");
  Scenario s = busy_scenario();
  Rng rng(11);
  // Placement failures are part of normal fuzzing traffic; time them too.
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(mutate(s, map, rng));
    } catch (const MutationError&) {
    }
  }
}
BENCHMARK(BM_Mutate);

void BM_RoundMetrics(benchmark::State& state) {
  const MapSpec& map = map_by_id("two_lane");
  Scenario s = busy_scenario();
  DetectorStack stack = DetectorStack::plain(DetectorProfile{});
  SimParams params;
  RoundTrace trace = simulate_round(s, map, stack, 5.0, params);
  for (auto _ : state) benchmark::DoNotOptimize(compute_round_metrics(trace));
}
BENCHMARK(BM_RoundMetrics);

}  // namespace
