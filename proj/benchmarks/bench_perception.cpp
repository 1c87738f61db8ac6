#include <benchmark/benchmark.h>

#include "scenefuzz/perception.hpp"
#include "scenefuzz/rng.hpp"

using namespace scenefuzz;

namespace {

Frame busy_frame(int obstacles) {
  Rng rng(7);
  Frame f;
  f.index = 0;
  f.timestamp = 0.0;
  for (int i = 0; i < obstacles; ++i)
    f.obstacles.push_back({i + 1, Category::vehicle,
                           {rng.uniform(-50.0, 50.0), rng.uniform(-8.0, 8.0)},
                           rng.uniform(0.0, 15.0), 0.0, 2.3, 0.9});
  return f;
}

void BM_Detect(benchmark::State& state) {
  DetectorProfile profile;
  Frame f = busy_frame(15);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        detect(profile, Sensor::lidar, f, {0.0, 0.0}, 0.0, 99, 60.0, 0.02));
}
BENCHMARK(BM_Detect);

void BM_TrackerObserve(benchmark::State& state) {
  NeuralTracker tracker(1, 0.1);
  tracker.begin_round();
  Frame f = busy_frame(15);
  for (auto _ : state)
    benchmark::DoNotOptimize(tracker.observe(f, {0.0, 0.0}, 60.0));
}
BENCHMARK(BM_TrackerObserve);

}  // namespace
