#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "scenefuzz/frame.hpp"
#include "scenefuzz/geometry.hpp"
#include "scenefuzz/scenario.hpp"

namespace scenefuzz {

enum class Sensor { lidar, camera, fusion };

const char* to_string(Sensor s);
std::optional<Sensor> sensor_from_string(std::string_view s);

struct Detection {
  int id = 0;  // ground-truth id for real detections, negative for phantoms
  Category category = Category::vehicle;
  Vec2 position;
  double speed = 0.0;
};

struct DetectionFrame {
  Sensor sensor = Sensor::lidar;
  double timestamp = 0.0;
  int source_frame_index = 0;
  std::vector<Detection> detections;

  const Detection* by_id(int id) const {
    for (const Detection& d : detections)
      if (d.id == id) return &d;
    return nullptr;
  }
};

struct SensorModel {
  double base = 0.0;     // detection probability at zero range
  double falloff = 0.0;  // linear drop over the full sensor range
};

enum class FusionPolicy { union_dedup, lidar_priority };

const char* to_string(FusionPolicy p);
std::optional<FusionPolicy> fusion_policy_from_string(std::string_view s);

struct DetectorProfile {
  SensorModel lidar{0.95, 0.3};
  SensorModel camera{0.75, 0.5};
  double size_penalty_pedestrian = 0.15;
  double size_penalty_vehicle = 0.0;
  double size_penalty_animal = 0.3;
  double noise_amplitude = 0.2;  // +- metres per axis on detected positions
  double phantom_rate = 0.005;   // per frame, per sensor
  double dedup_radius = 1.0;     // fusion pairing radius
  FusionPolicy fusion_policy = FusionPolicy::union_dedup;
  std::uint64_t network_seed = 1;
  double activation_threshold = 0.1;

  double size_penalty(Category c) const;

  // Ideal sensors: every in-range obstacle detected, exact positions, no
  // phantoms. Baseline for identity checks.
  static DetectorProfile perfect();
};

// clamp(base - falloff * distance / range - size_penalty, 0, 1)
double detection_probability(const DetectorProfile& profile, Sensor sensor,
                             Category category, double dist, double range);

// Runs one sensor over one ground-truth frame. Per-obstacle hits, position
// noise, and phantom injection are all realized via hashes of
// (round_seed, frame index, obstacle id, sensor), so a frame is detected
// identically every time it is replayed.
DetectionFrame detect(const DetectorProfile& profile, Sensor sensor,
                      const Frame& gt, Vec2 ego_position, double ego_heading,
                      std::uint64_t round_seed, double sensor_range,
                      double latency);

// Merges the two sensor frames into the fusion stream. union_dedup pairs
// same-category detections within dedup_radius one-to-one (nearest first)
// and keeps the lidar position of each pair; unpaired detections from both
// sensors pass through.
DetectionFrame fuse(const DetectionFrame& lidar_frame,
                    const DetectionFrame& camera_frame,
                    const DetectorProfile& profile);

// Small fixed-topology scoring network over a rasterized ego-centric
// occupancy grid. Exists to expose activation coverage, not to be a good
// tracker: a neuron counts as activated when its mean output over the
// frame's spatial positions exceeds the threshold.
class NeuralTracker {
 public:
  static constexpr int kGridDim = 16;
  static constexpr int kGridCells = kGridDim * kGridDim;
  static constexpr int kHidden = 32;
  // Two hidden layers expose one neuron per unit; the per-cell score head
  // is one spatial channel, so it contributes a single neuron id.
  static constexpr int kNeuronCount = 2 * kHidden + 1;

  NeuralTracker(std::uint64_t seed, double threshold);

  static std::vector<double> rasterize(const Frame& gt, Vec2 ego_position,
                                       double window_radius);

  struct ForwardResult {
    std::vector<double> scores;  // kGridCells per-cell scores
    std::set<int> activated;
  };
  ForwardResult forward(const std::vector<double>& grid) const;

  // forward() plus merge into the per-round activation set.
  std::set<int> observe(const Frame& gt, Vec2 ego_position, double window_radius);

  void begin_round();
  void end_round();  // folds the round set into the cumulative set

  const std::set<int>& activated_this_round() const { return round_; }
  const std::set<int>& activated_ever() const { return ever_; }
  double threshold() const { return threshold_; }

 private:
  double threshold_;
  std::vector<double> w1_;  // kHidden x kGridCells
  std::vector<double> w2_;  // kHidden x kHidden
  std::vector<double> w3_;  // kGridCells x kHidden
  std::set<int> round_;
  std::set<int> ever_;
};

// One simulation's perception stack: both sensors plus the optional
// coverage tracker.
struct DetectorStack {
  DetectorProfile profile;
  std::optional<NeuralTracker> tracker;

  static DetectorStack plain(const DetectorProfile& p) { return {p, std::nullopt}; }
  static DetectorStack with_tracker(const DetectorProfile& p) {
    return {p, NeuralTracker(p.network_seed, p.activation_threshold)};
  }
};

DetectorProfile parse_profile(std::string_view text);
std::string format_profile(const DetectorProfile& p);
DetectorProfile load_profile(const std::string& path);
void save_profile(const std::string& path, const DetectorProfile& p);

}  // namespace scenefuzz
