#include "scenefuzz/fuzzer.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <limits>
#include <utility>

#include "scenefuzz/errors.hpp"

namespace scenefuzz {

RoundSummary summarize_round(const RoundTrace& trace, const DetectorStack& stack,
                             double gate) {
  RoundSummary s;
  s.tracker_enabled = stack.tracker.has_value();
  if (stack.tracker) s.activated = stack.tracker->activated_this_round();
  s.metrics = compute_round_metrics(trace, gate);
  s.frames = static_cast<int>(trace.gt_frames.size());
  s.duration = trace.duration;
  s.events = trace.events;
  return s;
}

const char* to_string(FitnessKind k) {
  switch (k) {
    case FitnessKind::neuron_novelty: return "neuronNovelty";
    case FitnessKind::undetected: return "undetectedObstacles";
  }
  return "?";
}

std::optional<FitnessKind> fitness_kind_from_string(std::string_view s) {
  if (s == "neuronNovelty" || s == "neuron") return FitnessKind::neuron_novelty;
  if (s == "undetectedObstacles" || s == "undetected")
    return FitnessKind::undetected;
  return std::nullopt;
}

double fitness_neuron_novelty(const RoundSummary& child,
                              const RoundSummary& parent) {
  if (!child.tracker_enabled || !parent.tracker_enabled)
    throw ConfigError(
        "neuron-novelty fitness needs rounds simulated with a coverage tracker");
  int fresh = 0;
  for (int n : child.activated)
    if (!parent.activated.count(n)) ++fresh;
  return static_cast<double>(fresh);
}

double fitness_undetected(const RoundSummary& child, const RoundSummary& parent) {
  return child.metrics.avg_undetected - parent.metrics.avg_undetected;
}

FitnessFn fitness_for(FitnessKind k) {
  switch (k) {
    case FitnessKind::neuron_novelty: return fitness_neuron_novelty;
    case FitnessKind::undetected: return fitness_undetected;
  }
  throw ConfigError("unknown fitness kind");
}

void CoverageLedger::record(int round, const std::set<int>& activated) {
  int fresh = 0;
  for (int n : activated)
    if (cumulative.insert(n).second) ++fresh;
  entries.push_back({round, fresh, static_cast<int>(cumulative.size())});
}

void FuzzObserver::on_evaluated(const std::string&, const Scenario&,
                                const RoundTrace&, const RoundSummary&) {}
void FuzzObserver::on_round(const RoundRecord&) {}

namespace {

struct QueueItem {
  std::string id;
  Scenario scenario;
  std::shared_ptr<const RoundSummary> summary;  // null until first evaluated
};

std::string child_id_for_round(int round) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "r%04d", round);
  return buf;
}

}  // namespace

FuzzResult fuzz(const std::vector<SeedScenario>& seeds, const MapSpec& map,
                DetectorStack& stack, const FitnessFn& fitness,
                const FuzzConfig& config, FuzzObserver* observer) {
  if (seeds.empty()) throw ConfigError("fuzzing needs at least one seed scenario");
  if (config.max_rounds < 0) throw ConfigError("maxRounds must be non-negative");

  FuzzResult result;
  std::deque<QueueItem> queue;
  for (const SeedScenario& s : seeds) queue.push_back({s.id, s.scenario, nullptr});

  auto evaluate = [&](const std::string& id, const Scenario& scenario,
                      std::set<int>& round_activated) {
    RoundTrace trace = simulate_round(scenario, map, stack,
                                      config.round_duration, config.sim);
    auto summary = std::make_shared<RoundSummary>(
        summarize_round(trace, stack, config.gate));
    round_activated.insert(summary->activated.begin(), summary->activated.end());
    if (observer) observer->on_evaluated(id, scenario, trace, *summary);
    return summary;
  };

  for (int round = 1; round <= config.max_rounds; ++round) {
    QueueItem item = std::move(queue.front());
    queue.pop_front();

    Rng rng(hash_combine(config.master_seed, static_cast<std::uint64_t>(round)));
    std::set<int> round_activated;

    if (!item.summary)
      item.summary = evaluate(item.id, item.scenario, round_activated);

    RoundRecord record;
    record.round = round;
    record.parent_id = item.id;

    try {
      MutationOp op;
      Scenario child = mutate(item.scenario, map, rng, &op);
      std::string child_id = child_id_for_round(round);
      auto child_summary = evaluate(child_id, child, round_activated);

      record.child_id = child_id;
      record.op = describe(op);
      record.fitness = fitness(*child_summary, *item.summary);
      record.child_summary = *child_summary;

      if (record.fitness > 0.0) {
        record.accepted = true;
        result.accepted.push_back({child_id, item.id, round, record.fitness,
                                   child, *child_summary});
        queue.push_back({std::move(child_id), std::move(child), child_summary});
      } else {
        queue.push_back(std::move(item));
      }
    } catch (const MutationError& e) {
      record.error = e.what();
      queue.push_back(std::move(item));
    }

    result.ledger.record(round, round_activated);
    if (observer) observer->on_round(record);
    result.records.push_back(std::move(record));
    result.rounds_run = round;
  }

  for (const QueueItem& item : queue) result.final_queue.push_back(item.id);
  return result;
}

std::vector<RankEntry> rank_generated(
    const std::vector<AcceptedScenario>& accepted) {
  std::vector<RankEntry> entries;
  entries.reserve(accepted.size());
  for (const AcceptedScenario& a : accepted)
    entries.push_back({a.id, a.summary.metrics.danger_mismatches,
                       a.summary.metrics.caution_mismatches,
                       a.summary.metrics.min_mismatch_distance});
  std::sort(entries.begin(), entries.end(),
            [](const RankEntry& a, const RankEntry& b) {
              if (a.danger != b.danger) return a.danger > b.danger;
              if (a.caution != b.caution) return a.caution > b.caution;
              if (a.min_distance != b.min_distance)
                return a.min_distance < b.min_distance;
              return a.id < b.id;
            });
  return entries;
}

}  // namespace scenefuzz
