#include "scenefuzz/perception.hpp"

#include <algorithm>
#include <cmath>

#include "scenefuzz/errors.hpp"
#include "scenefuzz/rng.hpp"
#include "scenefuzz/textio.hpp"

namespace scenefuzz {

const char* to_string(Sensor s) {
  switch (s) {
    case Sensor::lidar: return "lidar";
    case Sensor::camera: return "camera";
    case Sensor::fusion: return "fusion";
  }
  return "?";
}

std::optional<Sensor> sensor_from_string(std::string_view s) {
  if (s == "lidar") return Sensor::lidar;
  if (s == "camera") return Sensor::camera;
  if (s == "fusion") return Sensor::fusion;
  return std::nullopt;
}

const char* to_string(FusionPolicy p) {
  switch (p) {
    case FusionPolicy::union_dedup: return "unionDedup";
    case FusionPolicy::lidar_priority: return "lidarPriority";
  }
  return "?";
}

std::optional<FusionPolicy> fusion_policy_from_string(std::string_view s) {
  if (s == "unionDedup") return FusionPolicy::union_dedup;
  if (s == "lidarPriority") return FusionPolicy::lidar_priority;
  return std::nullopt;
}

double DetectorProfile::size_penalty(Category c) const {
  switch (c) {
    case Category::pedestrian: return size_penalty_pedestrian;
    case Category::vehicle: return size_penalty_vehicle;
    case Category::animal: return size_penalty_animal;
  }
  return 0.0;
}

DetectorProfile DetectorProfile::perfect() {
  DetectorProfile p;
  p.lidar = {1.0, 0.0};
  p.camera = {1.0, 0.0};
  p.size_penalty_pedestrian = 0.0;
  p.size_penalty_vehicle = 0.0;
  p.size_penalty_animal = 0.0;
  p.noise_amplitude = 0.0;
  p.phantom_rate = 0.0;
  return p;
}

double detection_probability(const DetectorProfile& profile, Sensor sensor,
                             Category category, double dist, double range) {
  const SensorModel& m = sensor == Sensor::camera ? profile.camera : profile.lidar;
  double p = m.base - m.falloff * dist / range - profile.size_penalty(category);
  return std::clamp(p, 0.0, 1.0);
}

namespace {

// Hash lanes so the detection draw, the two noise axes, and the phantom
// stream never reuse the same value.
enum Lane : std::uint64_t {
  lane_hit = 1,
  lane_noise_x = 2,
  lane_noise_y = 3,
  lane_phantom_draw = 4,
  lane_phantom_dist = 5,
  lane_phantom_lat = 6,
  lane_phantom_cat = 7,
};

double draw(std::uint64_t round_seed, std::uint64_t frame, std::uint64_t entity,
            Sensor sensor, Lane lane) {
  std::uint64_t h = round_seed;
  h = hash_combine(h, frame);
  h = hash_combine(h, entity);
  h = hash_combine(h, static_cast<std::uint64_t>(sensor) + 11);
  h = hash_combine(h, lane);
  return hash01(h);
}

}  // namespace

DetectionFrame detect(const DetectorProfile& profile, Sensor sensor,
                      const Frame& gt, Vec2 ego_position, double ego_heading,
                      std::uint64_t round_seed, double sensor_range,
                      double latency) {
  DetectionFrame out;
  out.sensor = sensor;
  out.timestamp = gt.timestamp + latency;
  out.source_frame_index = gt.index;

  const std::uint64_t frame = static_cast<std::uint64_t>(gt.index);
  for (const FrameObstacle& o : gt.obstacles) {
    double dist = distance(o.position, ego_position);
    double p = detection_probability(profile, sensor, o.category, dist, sensor_range);
    if (draw(round_seed, frame, static_cast<std::uint64_t>(o.id), sensor, lane_hit) >= p)
      continue;
    Detection d;
    d.id = o.id;
    d.category = o.category;
    double nx = (2.0 * draw(round_seed, frame, o.id, sensor, lane_noise_x) - 1.0) *
                profile.noise_amplitude;
    double ny = (2.0 * draw(round_seed, frame, o.id, sensor, lane_noise_y) - 1.0) *
                profile.noise_amplitude;
    d.position = o.position + Vec2{nx, ny};
    d.speed = o.speed;
    out.detections.push_back(d);
  }

  // Phantom: a spurious detection dropped just ahead of the ego, where the
  // planner will care about it.
  if (draw(round_seed, frame, 0, sensor, lane_phantom_draw) < profile.phantom_rate) {
    double dist = 5.0 + 10.0 * draw(round_seed, frame, 0, sensor, lane_phantom_dist);
    double lat = -1.0 + 2.0 * draw(round_seed, frame, 0, sensor, lane_phantom_lat);
    Vec2 fwd = heading_vec(ego_heading);
    Detection d;
    // Far outside the ground-truth id space so a phantom can never alias a
    // real obstacle id.
    d.id = -(1000000 + static_cast<int>(frame) * 100 +
             (sensor == Sensor::camera ? 51 : 1));
    int cat = static_cast<int>(3.0 * draw(round_seed, frame, 0, sensor, lane_phantom_cat));
    d.category = static_cast<Category>(std::clamp(cat, 0, 2));
    d.position = ego_position + fwd * dist + perp(fwd) * lat;
    d.speed = 0.0;
    out.detections.push_back(d);
  }
  return out;
}

DetectionFrame fuse(const DetectionFrame& lidar_frame,
                    const DetectionFrame& camera_frame,
                    const DetectorProfile& profile) {
  if (lidar_frame.source_frame_index != camera_frame.source_frame_index)
    throw ConfigError("fuse: sensor frames come from different ground-truth frames");

  DetectionFrame out;
  out.sensor = Sensor::fusion;
  out.timestamp = std::max(lidar_frame.timestamp, camera_frame.timestamp);
  out.source_frame_index = lidar_frame.source_frame_index;

  if (profile.fusion_policy == FusionPolicy::lidar_priority) {
    out.detections = lidar_frame.detections.empty() ? camera_frame.detections
                                                    : lidar_frame.detections;
    return out;
  }

  // union_dedup: one-to-one nearest pairing of same-category detections
  // within the dedup radius; lidar positions win for paired detections.
  struct Cand {
    double dist;
    std::size_t li, ci;
  };
  std::vector<Cand> cands;
  for (std::size_t li = 0; li < lidar_frame.detections.size(); ++li) {
    for (std::size_t ci = 0; ci < camera_frame.detections.size(); ++ci) {
      const Detection& l = lidar_frame.detections[li];
      const Detection& c = camera_frame.detections[ci];
      if (l.category != c.category) continue;
      double d = distance(l.position, c.position);
      if (d <= profile.dedup_radius) cands.push_back({d, li, ci});
    }
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.li != b.li) return a.li < b.li;
    return a.ci < b.ci;
  });
  std::vector<bool> lidar_used(lidar_frame.detections.size(), false);
  std::vector<bool> camera_used(camera_frame.detections.size(), false);
  for (const Cand& c : cands) {
    if (lidar_used[c.li] || camera_used[c.ci]) continue;
    lidar_used[c.li] = true;
    camera_used[c.ci] = true;
  }
  out.detections = lidar_frame.detections;
  for (std::size_t ci = 0; ci < camera_frame.detections.size(); ++ci)
    if (!camera_used[ci]) out.detections.push_back(camera_frame.detections[ci]);
  return out;
}

NeuralTracker::NeuralTracker(std::uint64_t seed, double threshold)
    : threshold_(threshold) {
  Rng rng(mix64(seed));
  w1_.resize(static_cast<std::size_t>(kHidden) * kGridCells);
  w2_.resize(static_cast<std::size_t>(kHidden) * kHidden);
  w3_.resize(static_cast<std::size_t>(kGridCells) * kHidden);
  // Scales chosen so sparse occupancy grids (a handful of cells at 1.0)
  // produce pre-activations of order one; biases are zero so an empty grid
  // activates nothing.
  for (double& w : w1_) w = rng.uniform(-1.0, 1.0);
  for (double& w : w2_) w = rng.uniform(-0.5, 0.5);
  for (double& w : w3_) w = rng.uniform(-0.5, 0.5);
}

std::vector<double> NeuralTracker::rasterize(const Frame& gt, Vec2 ego_position,
                                             double window_radius) {
  std::vector<double> grid(kGridCells, 0.0);
  const double cell = 2.0 * window_radius / kGridDim;
  for (const FrameObstacle& o : gt.obstacles) {
    int ix = static_cast<int>(std::floor((o.position.x - ego_position.x + window_radius) / cell));
    int iy = static_cast<int>(std::floor((o.position.y - ego_position.y + window_radius) / cell));
    ix = std::clamp(ix, 0, kGridDim - 1);
    iy = std::clamp(iy, 0, kGridDim - 1);
    grid[static_cast<std::size_t>(iy) * kGridDim + ix] += 1.0;
  }
  return grid;
}

NeuralTracker::ForwardResult NeuralTracker::forward(const std::vector<double>& grid) const {
  ForwardResult res;
  std::vector<double> h1(kHidden, 0.0), h2(kHidden, 0.0);
  for (int i = 0; i < kHidden; ++i) {
    double acc = 0.0;
    const double* row = &w1_[static_cast<std::size_t>(i) * kGridCells];
    for (int j = 0; j < kGridCells; ++j) acc += row[j] * grid[j];
    h1[i] = std::max(0.0, acc);
    if (h1[i] > threshold_) res.activated.insert(i);
  }
  for (int i = 0; i < kHidden; ++i) {
    double acc = 0.0;
    const double* row = &w2_[static_cast<std::size_t>(i) * kHidden];
    for (int j = 0; j < kHidden; ++j) acc += row[j] * h1[j];
    h2[i] = std::max(0.0, acc);
    if (h2[i] > threshold_) res.activated.insert(kHidden + i);
  }
  res.scores.resize(kGridCells);
  double mean = 0.0;
  for (int i = 0; i < kGridCells; ++i) {
    double acc = 0.0;
    const double* row = &w3_[static_cast<std::size_t>(i) * kHidden];
    for (int j = 0; j < kHidden; ++j) acc += row[j] * h2[j];
    res.scores[i] = acc;
    mean += acc;
  }
  mean /= kGridCells;
  if (mean > threshold_) res.activated.insert(2 * kHidden);
  return res;
}

std::set<int> NeuralTracker::observe(const Frame& gt, Vec2 ego_position,
                                     double window_radius) {
  ForwardResult res = forward(rasterize(gt, ego_position, window_radius));
  round_.insert(res.activated.begin(), res.activated.end());
  return std::move(res.activated);
}

void NeuralTracker::begin_round() { round_.clear(); }

void NeuralTracker::end_round() { ever_.insert(round_.begin(), round_.end()); }

namespace {

using textio::Node;
using textio::ParseError;

SensorModel parse_sensor_model(const Node& block) {
  SensorModel m;
  m.base = textio::as_double(block.require("base"));
  m.falloff = textio::as_double(block.require("falloff"));
  return m;
}

}  // namespace

DetectorProfile parse_profile(std::string_view text) {
  Node root = textio::parse_document(text);
  DetectorProfile p;
  for (const Node& c : root.children) {
    if (c.key == "networkSeed") p.network_seed = textio::as_u64(c);
    else if (c.key == "activationThreshold") p.activation_threshold = textio::as_double(c);
    else if (c.key == "noiseAmplitude") p.noise_amplitude = textio::as_double(c);
    else if (c.key == "phantomRate") p.phantom_rate = textio::as_double(c);
    else if (c.key == "dedupRadius") p.dedup_radius = textio::as_double(c);
    else if (c.key == "fusionPolicy") {
      auto pol = fusion_policy_from_string(c.value);
      if (!pol) throw ParseError(c.line, "unknown fusion policy '" + c.value + "'");
      p.fusion_policy = *pol;
    } else if (c.key == "lidar") p.lidar = parse_sensor_model(c);
    else if (c.key == "camera") p.camera = parse_sensor_model(c);
    else if (c.key == "sizePenalty") {
      for (const Node& s : c.children) {
        if (s.key == "pedestrian") p.size_penalty_pedestrian = textio::as_double(s);
        else if (s.key == "vehicle") p.size_penalty_vehicle = textio::as_double(s);
        else if (s.key == "animal") p.size_penalty_animal = textio::as_double(s);
        else throw ParseError(s.line, "unknown size penalty category '" + s.key + "'");
      }
    } else {
      throw ParseError(c.line, "unknown field '" + c.key + "'");
    }
  }
  return p;
}

std::string format_profile(const DetectorProfile& p) {
  textio::Writer w;
  w.field("networkSeed", p.network_seed);
  w.field("activationThreshold", p.activation_threshold);
  w.field("noiseAmplitude", p.noise_amplitude);
  w.field("phantomRate", p.phantom_rate);
  w.field("dedupRadius", p.dedup_radius);
  w.field("fusionPolicy", to_string(p.fusion_policy));
  w.open("lidar");
  w.field("base", p.lidar.base);
  w.field("falloff", p.lidar.falloff);
  w.close();
  w.open("camera");
  w.field("base", p.camera.base);
  w.field("falloff", p.camera.falloff);
  w.close();
  w.open("sizePenalty");
  w.field("pedestrian", p.size_penalty_pedestrian);
  w.field("vehicle", p.size_penalty_vehicle);
  w.field("animal", p.size_penalty_animal);
  w.close();
  return w.str();
}

DetectorProfile load_profile(const std::string& path) {
  return parse_profile(textio::read_file(path));
}

void save_profile(const std::string& path, const DetectorProfile& p) {
  textio::write_file(path, format_profile(p));
}

}  // namespace scenefuzz
