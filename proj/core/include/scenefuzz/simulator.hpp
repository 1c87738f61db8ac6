#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "scenefuzz/frame.hpp"
#include "scenefuzz/geometry.hpp"
#include "scenefuzz/perception.hpp"
#include "scenefuzz/scenario.hpp"

namespace scenefuzz {

struct SimParams {
  double frame_rate = 10.0;        // ticks per second
  double detector_latency = 0.02;  // seconds between a frame and its detections
  double sensor_range = 60.0;      // ground-truth frames contain obstacles within this
  double corridor_margin = 0.5;    // swept-footprint margin for the planner
  double brake_distance = 15.0;    // on-corridor obstacles closer than this stop the ego
  double decel = 6.0;              // m/s^2 while braking
  double accel = 2.0;              // m/s^2 toward cruise speed
  double cruise_speed = 10.0;      // m/s
  double arrival_tolerance = 2.0;  // metres to the destination
};

enum class EventKind { collision, brake_start, brake_end, arrived };

const char* to_string(EventKind k);
std::optional<EventKind> event_kind_from_string(std::string_view s);

struct Event {
  double timestamp = 0.0;
  EventKind kind = EventKind::collision;
  // collision: struck obstacle id; brake_start: causing detection id.
  int id = -1;
};

struct BrakeCause {
  int source_frame_index = 0;  // ground-truth frame behind the detection frame
  int detection_id = 0;
};

struct EgoState {
  Vec2 position;
  double heading = 0.0;
  double speed = 0.0;
  std::vector<Vec2> planned_trajectory;  // starts at the current position
  bool brake = false;
  std::optional<BrakeCause> brake_cause;
};

// Kinematic state of one obstacle during simulation. Obstacles with a
// target head straight for it at constant speed and stop there; without
// one they drift along their heading.
struct ObstacleKin {
  int id = 0;
  Category category = Category::vehicle;
  Vec2 position;
  double heading = 0.0;
  double speed = 0.0;
  double half_len = 0.0;
  double half_wid = 0.0;
  std::optional<Vec2> target;

  Rect rect() const { return {position, half_len, half_wid}; }
};

struct RoundTrace {
  Scenario scenario;
  double frame_rate = 10.0;
  double planned_duration = 0.0;
  double duration = 0.0;  // actual; shorter on collision or arrival
  std::vector<Frame> gt_frames;
  std::vector<DetectionFrame> lidar_frames;
  std::vector<DetectionFrame> camera_frames;
  std::vector<DetectionFrame> fusion_frames;
  std::vector<EgoState> ego_states;  // one per ground-truth frame
  std::vector<Event> events;

  bool has_event(EventKind k) const;
  const Event* first_event(EventKind k) const;
};

// Nominal obstacle half-width the planner assumes per category, since
// detections carry no footprint.
double planning_radius(Category c);

// One planning decision from the latest available detections (never ground
// truth). Chooses a straight course to the destination, laterally offset
// around the nearest on-corridor detection beyond the brake distance, or
// flags a brake when one is within it.
EgoState plan_step(const EgoState& ego, const DetectionFrame* detections,
                   Vec2 destination, double ego_half_len, double ego_half_wid,
                   const SimParams& params);

// First obstacle (ascending position in the list) whose footprint strictly
// intersects the ego footprint.
std::optional<int> check_collision(const Rect& ego_rect,
                                   const std::vector<ObstacleKin>& obstacles);

// Fixed-step closed-loop run: range-filtered ground-truth frame, both
// sensors plus fusion, planner step, kinematics, events. Terminates early
// on collision or arrival. The scenario must validate cleanly.
RoundTrace simulate_round(const Scenario& scenario, const MapSpec& map,
                          DetectorStack& stack, double duration,
                          const SimParams& params = {});

// Same, resolving the map from the scenario's map id.
RoundTrace simulate_round(const Scenario& scenario, DetectorStack& stack,
                          double duration, const SimParams& params = {});

}  // namespace scenefuzz
