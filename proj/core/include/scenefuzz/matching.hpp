#pragma once

#include <map>
#include <optional>
#include <vector>

#include "scenefuzz/frame.hpp"
#include "scenefuzz/perception.hpp"

namespace scenefuzz {

struct RoundTrace;  // simulator.hpp

// Matching gate: detection/ground-truth pairs farther apart than this
// (Manhattan) are demoted to unmatched on both sides.
inline constexpr double kDefaultGate = 3.0;

struct MatchedPair {
  int gt_id = 0;
  int det_id = 0;
  double distance = 0.0;  // Manhattan
};

// Per-frame match report across all categories.
struct FrameMatch {
  int frame_index = 0;
  std::vector<MatchedPair> pairs;
  std::vector<int> unmatched_gt;
  std::vector<int> unmatched_det;
  std::optional<double> precision;  // absent when the frame has no detections
  std::optional<double> recall;     // absent when the frame has no ground truth
};

struct FramePair {
  const Frame* gt = nullptr;
  const DetectionFrame* det = nullptr;
};

// Step one: pair ground-truth frames with detection frames of one sensor
// stream by source frame index. Throws MatchError when a counterpart is
// missing or duplicated, or a detection frame is not strictly later than
// its source.
std::vector<FramePair> match_frames(const std::vector<Frame>& gt,
                                    const std::vector<DetectionFrame>& det);

// Step two: category-partitioned minimum-Manhattan-cost assignment with
// gating. Matching never uses ids; they only label the result.
FrameMatch match_frame_pair(const Frame& gt, const DetectionFrame& det,
                            double gate = kDefaultGate);

std::optional<double> precision(const FrameMatch& m);
std::optional<double> recall(const FrameMatch& m);

// Fraction of the frames containing the obstacle in which it was matched.
// Throws ConfigError for an id that never appears.
double perception_rate(const std::vector<Frame>& gt,
                       const std::vector<FrameMatch>& matches, int obstacle_id);

enum class DangerLabel { danger, caution, none };

const char* to_string(DangerLabel l);

// danger within 1 m of the ego, caution within 2 m, none beyond.
DangerLabel danger_label(double dist);

struct ObstacleRate {
  Category category = Category::vehicle;
  int frames_present = 0;
  int frames_detected = 0;
  double rate = 0.0;
};

// Everything the fuzzer, ranking, and reports need from one simulated
// round, derived from the fusion stream.
struct RoundMetrics {
  std::vector<FrameMatch> frame_matches;
  std::optional<double> avg_precision;  // mean over frames where defined
  std::optional<double> avg_recall;
  double avg_undetected = 0.0;  // mean unmatched ground truth per frame
  std::map<int, ObstacleRate> rates;
  std::optional<double> rate_pedestrian;  // mean over that category's obstacles
  std::optional<double> rate_vehicle;
  std::optional<double> rate_animal;
  int danger_mismatches = 0;   // mismatched obstacles within 1 m of the ego
  int caution_mismatches = 0;  // within 2 m
  double min_mismatch_distance = 0.0;  // to the planned trajectory; inf if none
};

RoundMetrics compute_round_metrics(const RoundTrace& trace,
                                   double gate = kDefaultGate);

}  // namespace scenefuzz
