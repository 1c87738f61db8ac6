#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scenefuzz/matching.hpp"
#include "scenefuzz/mutation.hpp"
#include "scenefuzz/simulator.hpp"

namespace scenefuzz {

// Everything the search needs to compare a child against its parent,
// distilled from one simulated round.
struct RoundSummary {
  bool tracker_enabled = false;
  std::set<int> activated;  // neurons activated during the round
  RoundMetrics metrics;
  int frames = 0;
  double duration = 0.0;
  std::vector<Event> events;
};

// Reads the tracker's per-round activation set, so call right after the
// simulation that produced `trace`, before the stack simulates anything else.
RoundSummary summarize_round(const RoundTrace& trace, const DetectorStack& stack,
                             double gate = kDefaultGate);

// Positive fitness admits the child into the generated set.
using FitnessFn =
    std::function<double(const RoundSummary& child, const RoundSummary& parent)>;

enum class FitnessKind { neuron_novelty, undetected };

const char* to_string(FitnessKind k);
// Accepts the canonical names plus the short forms "neuron" / "undetected".
std::optional<FitnessKind> fitness_kind_from_string(std::string_view s);

// Count of neurons the child activated that the parent did not. Throws
// ConfigError when the rounds ran without a coverage tracker.
double fitness_neuron_novelty(const RoundSummary& child,
                              const RoundSummary& parent);

// Increase in mean undetected ground-truth obstacles per frame.
double fitness_undetected(const RoundSummary& child, const RoundSummary& parent);

FitnessFn fitness_for(FitnessKind k);

// Activation coverage growth over the campaign. The cumulative set is by
// construction the union of every per-round set recorded into it.
struct CoverageLedger {
  struct Entry {
    int round = 0;
    int fresh = 0;       // neurons first seen this round
    int cumulative = 0;  // cumulative set size after this round
  };
  std::set<int> cumulative;
  std::vector<Entry> entries;

  void record(int round, const std::set<int>& activated);
};

struct FuzzConfig {
  int max_rounds = 100;
  std::uint64_t master_seed = 1;
  double round_duration = 5.0;  // seconds simulated per evaluation
  double gate = kDefaultGate;
  SimParams sim;
};

struct SeedScenario {
  std::string id;
  Scenario scenario;
};

struct RoundRecord {
  int round = 0;
  std::string parent_id;
  std::string child_id;  // empty when the mutation failed
  std::string op;        // describe() of the applied operator
  double fitness = 0.0;
  bool accepted = false;
  std::string error;  // mutation failure message
  std::optional<RoundSummary> child_summary;
};

struct AcceptedScenario {
  std::string id;
  std::string parent_id;
  int round = 0;
  double fitness = 0.0;
  Scenario scenario;
  RoundSummary summary;
};

// Hooks for persisting artifacts as the search runs. on_evaluated fires once
// per simulated scenario -- seeds on their first dequeue, children every
// round their mutation succeeds.
struct FuzzObserver {
  virtual ~FuzzObserver() = default;
  virtual void on_evaluated(const std::string& id, const Scenario& scenario,
                            const RoundTrace& trace, const RoundSummary& summary);
  virtual void on_round(const RoundRecord& record);
};

struct FuzzResult {
  std::vector<AcceptedScenario> accepted;
  CoverageLedger ledger;
  std::vector<RoundRecord> records;
  std::vector<std::string> final_queue;  // ids, front first
  int rounds_run = 0;
};

// Queue-driven mutation search. Each round dequeues one scenario, evaluates
// it if it never ran (seeds are evaluated lazily), applies one mutation, and
// simulates the child; a positive fitness enqueues the child in the parent's
// place, otherwise the parent goes back. Exactly one scenario is enqueued
// per round, so the queue never grows or shrinks. Each round draws from its
// own generator seeded by (master_seed, round), so any round can be
// reproduced without replaying the rounds before it.
FuzzResult fuzz(const std::vector<SeedScenario>& seeds, const MapSpec& map,
                DetectorStack& stack, const FitnessFn& fitness,
                const FuzzConfig& config, FuzzObserver* observer = nullptr);

// Ranking of generated scenarios: most danger-zone mismatches first, then
// caution-zone, then smallest mismatch distance to the planned path.
struct RankEntry {
  std::string id;
  int danger = 0;
  int caution = 0;
  double min_distance = 0.0;
};

std::vector<RankEntry> rank_generated(const std::vector<AcceptedScenario>& accepted);

}  // namespace scenefuzz
