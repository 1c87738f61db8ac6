#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scenefuzz/matching.hpp"
#include "scenefuzz/simulator.hpp"

namespace scenefuzz {

// Round verdicts in precedence order: a collision outranks a phantom-caused
// stop, which outranks failing to reach the destination.
enum class Verdict { collision, unnecessary_stop, wrong_destination, nominal };

const char* to_string(Verdict v);
std::optional<Verdict> verdict_from_string(std::string_view s);

// How far back the collision evidence looks when summarising how reliably
// the struck obstacle was perceived on approach.
inline constexpr double kEvidenceWindow = 4.0;

struct Evidence {
  double timestamp = 0.0;
  std::string description;
  std::vector<int> frame_indices;
};

struct OutcomeReport {
  Verdict verdict = Verdict::nominal;
  std::vector<Evidence> evidence;
  std::optional<int> collided_id;
  // Fraction of the window frames containing the struck obstacle in which
  // it was matched; absent when it never appeared in the window.
  std::optional<double> collided_rate;
  std::optional<double> distance_to_destination;  // wrong-destination rounds
  bool left_roadway = false;  // round ended with the ego off every lane
};

// `matches` must be the per-frame fusion match reports for this trace
// (RoundMetrics::frame_matches).
OutcomeReport classify(const RoundTrace& trace,
                       const std::vector<FrameMatch>& matches,
                       const MapSpec& map);

}  // namespace scenefuzz
