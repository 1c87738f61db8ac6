#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenefuzz/geometry.hpp"

namespace scenefuzz {

enum class Category { pedestrian, vehicle, animal };

const char* to_string(Category c);
std::optional<Category> category_from_string(std::string_view s);

// Hard cap on scene complexity; mutation refuses to grow past it and
// validation flags scenes that exceed it.
inline constexpr int kMaxObstacles = 15;

// Speed ceiling used when sampling obstacle velocities, per category.
double max_speed(Category c);

struct Prototype {
  std::string_view name;
  Category category;
  double half_len;
  double half_wid;
};

std::span<const Prototype> prototypes();
std::span<const Prototype> prototypes(Category c);
const Prototype* find_prototype(std::string_view name);

struct ObstacleSpec {
  int id = 0;
  Category category = Category::vehicle;
  std::string prototype;
  Vec2 position;
  double heading = 0.0;  // radians, [0, 2*pi)
  double speed = 0.0;    // m/s, >= 0
  double half_len = 0.0;
  double half_wid = 0.0;
  std::optional<Vec2> target;  // absent = drift along heading

  Rect rect() const { return {position, half_len, half_wid}; }
};

struct EgoSpec {
  Vec2 position;
  double heading = 0.0;
  double speed = 0.0;
  Vec2 destination;
  double half_len = 2.3;
  double half_wid = 1.1;

  Rect rect() const { return {position, half_len, half_wid}; }
};

struct Scenario {
  std::string map_id;
  std::uint64_t rng_seed = 0;
  EgoSpec ego;
  std::vector<ObstacleSpec> obstacles;

  const ObstacleSpec* obstacle_by_id(int id) const;
  int max_obstacle_id() const;
};

struct LaneSegment {
  Vec2 start;
  Vec2 end;
  double width = 3.5;
};

struct MapSpec {
  std::string id;
  Rect drivable;  // axis-aligned drivable region
  std::vector<LaneSegment> lanes;
  double sidewalk_margin = 0.0;  // strip beyond the lanes, inside drivable
};

// Built-in maps, looked up by Scenario::map_id. Throws ConfigError on an
// unknown id.
const MapSpec& map_by_id(const std::string& id);
std::vector<std::string> builtin_map_ids();

bool in_any_lane(const MapSpec& map, Vec2 p);

enum class Rule {
  obstacle_limit,
  obstacle_overlap,
  ego_overlap,
  duplicate_id,
  negative_speed,
  bad_footprint,
  heading_range,
};

const char* to_string(Rule r);

struct Violation {
  Rule rule;
  int id_a = -1;  // -1 designates the ego
  int id_b = -1;
  std::string message;
};

// Empty result iff the scenario is valid. Checks the obstacle-count cap,
// pairwise footprint overlap (obstacles and ego, strict interiors), id
// uniqueness, and per-entity field ranges.
std::vector<Violation> validate(const Scenario& s);

// Text round-trip. format_scenario emits the canonical form (fixed key
// order, obstacles sorted by id) so saving is byte-reproducible; parsing
// accepts semantically invalid scenarios — run validate separately.
Scenario parse_scenario(std::string_view text);
std::string format_scenario(const Scenario& s);
Scenario load_scenario(const std::string& path);
void save_scenario(const std::string& path, const Scenario& s);

}  // namespace scenefuzz
