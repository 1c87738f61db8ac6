#include "scenefuzz/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scenefuzz/errors.hpp"

namespace scenefuzz {

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::collision: return "collision";
    case EventKind::brake_start: return "brakeStart";
    case EventKind::brake_end: return "brakeEnd";
    case EventKind::arrived: return "arrived";
  }
  return "?";
}

std::optional<EventKind> event_kind_from_string(std::string_view s) {
  if (s == "collision") return EventKind::collision;
  if (s == "brakeStart") return EventKind::brake_start;
  if (s == "brakeEnd") return EventKind::brake_end;
  if (s == "arrived") return EventKind::arrived;
  return std::nullopt;
}

bool RoundTrace::has_event(EventKind k) const {
  return first_event(k) != nullptr;
}

const Event* RoundTrace::first_event(EventKind k) const {
  for (const Event& e : events)
    if (e.kind == k) return &e;
  return nullptr;
}

double planning_radius(Category c) {
  switch (c) {
    case Category::pedestrian: return 0.3;
    case Category::vehicle: return 1.0;
    case Category::animal: return 0.4;
  }
  return 0.5;
}

EgoState plan_step(const EgoState& ego, const DetectionFrame* detections,
                   Vec2 destination, double /*ego_half_len*/, double ego_half_wid,
                   const SimParams& params) {
  EgoState next = ego;
  next.brake = false;
  next.brake_cause.reset();
  next.planned_trajectory = {ego.position, destination};

  Vec2 to_dest = destination - ego.position;
  double len = norm(to_dest);
  if (len < 1e-9 || !detections) return next;
  Vec2 u = normalized(to_dest);
  Vec2 side = perp(u);
  double corridor_half = ego_half_wid + params.corridor_margin;

  const Detection* nearest = nullptr;
  double nearest_dist = std::numeric_limits<double>::infinity();
  double nearest_lat = 0.0, nearest_s = 0.0;
  for (const Detection& d : detections->detections) {
    Vec2 rel = d.position - ego.position;
    double s = dot(rel, u);
    if (s <= 0.0 || s >= len) continue;
    double lat = dot(rel, side);
    if (std::abs(lat) >= corridor_half + planning_radius(d.category)) continue;
    double dist = norm(rel);
    if (dist < nearest_dist ||
        (dist == nearest_dist && nearest && d.id < nearest->id)) {
      nearest = &d;
      nearest_dist = dist;
      nearest_lat = lat;
      nearest_s = s;
    }
  }
  if (!nearest) return next;

  if (nearest_dist <= params.brake_distance) {
    // Too close to steer around: stop until the corridor clears.
    next.brake = true;
    next.brake_cause = BrakeCause{detections->source_frame_index, nearest->id};
    return next;
  }

  // Far enough ahead: bend the course sideways just enough to clear it.
  double clearance = corridor_half + planning_radius(nearest->category) + 0.2;
  double shift = nearest_lat >= 0.0 ? nearest_lat - clearance : nearest_lat + clearance;
  Vec2 waypoint = ego.position + u * nearest_s + side * shift;
  next.planned_trajectory = {ego.position, waypoint, destination};
  return next;
}

std::optional<int> check_collision(const Rect& ego_rect,
                                   const std::vector<ObstacleKin>& obstacles) {
  for (const ObstacleKin& o : obstacles)
    if (overlaps(ego_rect, o.rect())) return o.id;
  return std::nullopt;
}

namespace {

void advance_obstacle(ObstacleKin& o, double dt) {
  if (o.speed <= 0.0) return;
  if (o.target) {
    Vec2 to_target = *o.target - o.position;
    double dist = norm(to_target);
    double step = o.speed * dt;
    o.position = step >= dist ? *o.target
                              : o.position + normalized(to_target) * step;
  } else {
    o.position = o.position + heading_vec(o.heading) * (o.speed * dt);
  }
}

// Walks `step` metres along the polyline from its start; returns the end
// position and, when any distance was covered, the direction moved in.
std::pair<Vec2, std::optional<double>> walk_polyline(const std::vector<Vec2>& traj,
                                                     double step) {
  Vec2 pos = traj.front();
  std::optional<double> heading;
  double remaining = step;
  for (std::size_t seg = 1; seg < traj.size() && remaining > 0.0; ++seg) {
    Vec2 target = traj[seg];
    double d = distance(pos, target);
    if (d < 1e-12) continue;
    Vec2 dir = normalized(target - pos);
    heading = normalize_angle(std::atan2(dir.y, dir.x));
    if (remaining < d) {
      pos = pos + dir * remaining;
      remaining = 0.0;
    } else {
      pos = target;
      remaining -= d;
    }
  }
  return {pos, heading};
}

void check_params(const SimParams& p) {
  if (p.frame_rate <= 0.0) throw ConfigError("frame rate must be positive");
  if (p.detector_latency <= 0.0)
    throw ConfigError("detector latency must be positive");
  if (p.sensor_range <= 0.0) throw ConfigError("sensor range must be positive");
}

}  // namespace

RoundTrace simulate_round(const Scenario& scenario, const MapSpec& /*map*/,
                          DetectorStack& stack, double duration,
                          const SimParams& params) {
  check_params(params);
  if (duration <= 0.0) throw ConfigError("round duration must be positive");
  if (auto violations = validate(scenario); !violations.empty())
    throw ConfigError("invalid scenario: " + violations.front().message);

  RoundTrace trace;
  trace.scenario = scenario;
  trace.frame_rate = params.frame_rate;
  trace.planned_duration = duration;

  std::vector<ObstacleKin> kins;
  kins.reserve(scenario.obstacles.size());
  for (const ObstacleSpec& o : scenario.obstacles)
    kins.push_back({o.id, o.category, o.position, o.heading, o.speed, o.half_len,
                    o.half_wid, o.target});
  std::sort(kins.begin(), kins.end(),
            [](const ObstacleKin& a, const ObstacleKin& b) { return a.id < b.id; });

  EgoState ego;
  ego.position = scenario.ego.position;
  ego.heading = scenario.ego.heading;
  ego.speed = scenario.ego.speed;
  ego.planned_trajectory = {ego.position, scenario.ego.destination};

  if (stack.tracker) stack.tracker->begin_round();

  const double dt = 1.0 / params.frame_rate;
  const int max_ticks =
      static_cast<int>(std::ceil(duration * params.frame_rate - 1e-9));
  bool terminated = false;

  for (int k = 0; k < max_ticks; ++k) {
    const double t = k / params.frame_rate;

    Frame gt;
    gt.index = k;
    gt.timestamp = t;
    for (const ObstacleKin& o : kins)
      if (distance(o.position, ego.position) <= params.sensor_range)
        gt.obstacles.push_back({o.id, o.category, o.position, o.speed, o.heading,
                                o.half_len, o.half_wid});

    DetectionFrame lidar =
        detect(stack.profile, Sensor::lidar, gt, ego.position, ego.heading,
               scenario.rng_seed, params.sensor_range, params.detector_latency);
    DetectionFrame camera =
        detect(stack.profile, Sensor::camera, gt, ego.position, ego.heading,
               scenario.rng_seed, params.sensor_range, params.detector_latency);
    DetectionFrame fused = fuse(lidar, camera, stack.profile);

    if (stack.tracker)
      stack.tracker->observe(gt, ego.position, params.sensor_range);

    // The planner only consumes detections already available at this tick;
    // with latency below the tick period that is the previous tick's
    // fusion frame.
    const DetectionFrame* available = nullptr;
    for (auto it = trace.fusion_frames.rbegin(); it != trace.fusion_frames.rend(); ++it) {
      if (it->timestamp <= t) {
        available = &*it;
        break;
      }
    }

    bool was_braking = ego.brake;
    EgoState planned = plan_step(ego, available, scenario.ego.destination,
                                 scenario.ego.half_len, scenario.ego.half_wid,
                                 params);
    if (planned.brake && !was_braking)
      trace.events.push_back({t, EventKind::brake_start,
                              planned.brake_cause ? planned.brake_cause->detection_id : -1});
    else if (!planned.brake && was_braking)
      trace.events.push_back({t, EventKind::brake_end, -1});

    trace.gt_frames.push_back(std::move(gt));
    trace.lidar_frames.push_back(std::move(lidar));
    trace.camera_frames.push_back(std::move(camera));
    trace.fusion_frames.push_back(std::move(fused));
    trace.ego_states.push_back(planned);

    for (ObstacleKin& o : kins) advance_obstacle(o, dt);

    double new_speed = planned.brake
                           ? std::max(0.0, planned.speed - params.decel * dt)
                           : std::min(params.cruise_speed,
                                      planned.speed + params.accel * dt);
    auto [new_pos, moved_heading] =
        walk_polyline(planned.planned_trajectory, new_speed * dt);
    ego = planned;
    ego.position = new_pos;
    ego.speed = new_speed;
    if (moved_heading) ego.heading = *moved_heading;

    const double t_next = (k + 1) / params.frame_rate;
    if (auto struck = check_collision(
            Rect{ego.position, scenario.ego.half_len, scenario.ego.half_wid}, kins)) {
      trace.events.push_back({t_next, EventKind::collision, *struck});
      trace.duration = t_next;
      terminated = true;
      break;
    }
    if (distance(ego.position, scenario.ego.destination) <= params.arrival_tolerance) {
      trace.events.push_back({t_next, EventKind::arrived, -1});
      trace.duration = t_next;
      terminated = true;
      break;
    }
  }

  if (!terminated) trace.duration = duration;
  if (stack.tracker) stack.tracker->end_round();
  return trace;
}

RoundTrace simulate_round(const Scenario& scenario, DetectorStack& stack,
                          double duration, const SimParams& params) {
  return simulate_round(scenario, map_by_id(scenario.map_id), stack, duration,
                        params);
}

}  // namespace scenefuzz
