#include "scenefuzz/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "scenefuzz/errors.hpp"
#include "scenefuzz/textio.hpp"

namespace scenefuzz {

const char* to_string(Category c) {
  switch (c) {
    case Category::pedestrian: return "pedestrian";
    case Category::vehicle: return "vehicle";
    case Category::animal: return "animal";
  }
  return "?";
}

std::optional<Category> category_from_string(std::string_view s) {
  if (s == "pedestrian") return Category::pedestrian;
  if (s == "vehicle") return Category::vehicle;
  if (s == "animal") return Category::animal;
  return std::nullopt;
}

double max_speed(Category c) {
  return c == Category::vehicle ? 15.0 : 3.0;
}

namespace {

constexpr std::array<Prototype, 10> kPrototypes{{
    {"pedestrian_adult", Category::pedestrian, 0.3, 0.3},
    {"pedestrian_child", Category::pedestrian, 0.25, 0.25},
    {"pedestrian_worker", Category::pedestrian, 0.35, 0.35},
    {"sedan", Category::vehicle, 2.3, 0.9},
    {"suv", Category::vehicle, 2.4, 1.0},
    {"hatchback", Category::vehicle, 2.05, 0.85},
    {"boxtruck", Category::vehicle, 3.4, 1.25},
    {"schoolbus", Category::vehicle, 5.5, 1.25},
    {"deer", Category::animal, 0.9, 0.35},
    {"turkey", Category::animal, 0.4, 0.3},
}};

}  // namespace

std::span<const Prototype> prototypes() { return kPrototypes; }

std::span<const Prototype> prototypes(Category c) {
  std::size_t first = 0;
  while (first < kPrototypes.size() && kPrototypes[first].category != c) ++first;
  std::size_t last = first;
  while (last < kPrototypes.size() && kPrototypes[last].category == c) ++last;
  return std::span<const Prototype>(kPrototypes).subspan(first, last - first);
}

const Prototype* find_prototype(std::string_view name) {
  for (const Prototype& p : kPrototypes)
    if (p.name == name) return &p;
  return nullptr;
}

const ObstacleSpec* Scenario::obstacle_by_id(int id) const {
  for (const ObstacleSpec& o : obstacles)
    if (o.id == id) return &o;
  return nullptr;
}

int Scenario::max_obstacle_id() const {
  int m = 0;
  for (const ObstacleSpec& o : obstacles) m = std::max(m, o.id);
  return m;
}

namespace {

// Straight two-lane strip along x. Lane centerlines at y = -1.75 (eastbound)
// and y = +1.75 (westbound); sidewalk strip beyond the lanes up to the
// drivable boundary.
const MapSpec kTwoLane = [] {
  MapSpec m;
  m.id = "two_lane";
  m.drivable = {{100.0, 0.0}, 110.0, 8.0};  // x in [-10, 210], y in [-8, 8]
  m.lanes = {
      {{-10.0, -1.75}, {210.0, -1.75}, 3.5},
      {{210.0, 1.75}, {-10.0, 1.75}, 3.5},
  };
  m.sidewalk_margin = 4.5;
  return m;
}();

}  // namespace

const MapSpec& map_by_id(const std::string& id) {
  if (id == kTwoLane.id) return kTwoLane;
  throw ConfigError("unknown map id '" + id + "'");
}

std::vector<std::string> builtin_map_ids() { return {kTwoLane.id}; }

bool in_any_lane(const MapSpec& map, Vec2 p) {
  for (const LaneSegment& lane : map.lanes)
    if (point_segment_distance(p, lane.start, lane.end) <= lane.width / 2.0)
      return true;
  return false;
}

const char* to_string(Rule r) {
  switch (r) {
    case Rule::obstacle_limit: return "obstacle-limit";
    case Rule::obstacle_overlap: return "obstacle-overlap";
    case Rule::ego_overlap: return "ego-overlap";
    case Rule::duplicate_id: return "duplicate-id";
    case Rule::negative_speed: return "negative-speed";
    case Rule::bad_footprint: return "bad-footprint";
    case Rule::heading_range: return "heading-range";
  }
  return "?";
}

namespace {

void check_body(std::vector<Violation>& out, int id, double heading, double speed,
                double half_len, double half_wid, const char* who) {
  std::string name = id < 0 ? std::string(who) : std::string(who) + " " + std::to_string(id);
  if (speed < 0.0)
    out.push_back({Rule::negative_speed, id, -1, name + " has negative speed"});
  if (half_len <= 0.0 || half_wid <= 0.0)
    out.push_back({Rule::bad_footprint, id, -1, name + " has non-positive footprint extents"});
  if (!(heading >= 0.0) || heading >= 2.0 * std::numbers::pi)
    out.push_back({Rule::heading_range, id, -1, name + " heading outside [0, 2*pi)"});
}

}  // namespace

std::vector<Violation> validate(const Scenario& s) {
  std::vector<Violation> out;
  if (static_cast<int>(s.obstacles.size()) > kMaxObstacles)
    out.push_back({Rule::obstacle_limit, -1, -1,
                   "scene has " + std::to_string(s.obstacles.size()) + " obstacles, limit is " +
                       std::to_string(kMaxObstacles)});

  check_body(out, -1, s.ego.heading, s.ego.speed, s.ego.half_len, s.ego.half_wid, "ego");
  for (const ObstacleSpec& o : s.obstacles)
    check_body(out, o.id, o.heading, o.speed, o.half_len, o.half_wid, "obstacle");

  // Pairwise checks in ascending id order keep the report deterministic.
  std::vector<const ObstacleSpec*> sorted;
  sorted.reserve(s.obstacles.size());
  for (const ObstacleSpec& o : s.obstacles) sorted.push_back(&o);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](auto* a, auto* b) { return a->id < b->id; });

  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      if (sorted[i]->id == sorted[j]->id) {
        out.push_back({Rule::duplicate_id, sorted[i]->id, sorted[j]->id,
                       "duplicate obstacle id " + std::to_string(sorted[i]->id)});
      } else if (overlaps(sorted[i]->rect(), sorted[j]->rect())) {
        out.push_back({Rule::obstacle_overlap, sorted[i]->id, sorted[j]->id,
                       "obstacles " + std::to_string(sorted[i]->id) + " and " +
                           std::to_string(sorted[j]->id) + " overlap"});
      }
    }
    if (overlaps(sorted[i]->rect(), s.ego.rect()))
      out.push_back({Rule::ego_overlap, sorted[i]->id, -1,
                     "obstacle " + std::to_string(sorted[i]->id) + " overlaps the ego"});
  }
  return out;
}

namespace {

using textio::Node;
using textio::ParseError;

Vec2 node_vec2(const Node& n) {
  auto [x, y] = textio::as_pair(n);
  return {x, y};
}

ObstacleSpec parse_obstacle(const Node& block) {
  textio::check_fields(block, {"id", "category", "prototype", "position",
                               "heading", "speed", "footprint", "target"});
  ObstacleSpec o;
  o.id = static_cast<int>(textio::as_i64(block.require("id")));
  const Node& cat = block.require("category");
  auto c = category_from_string(cat.value);
  if (!c) throw ParseError(cat.line, "unknown category '" + cat.value + "'");
  o.category = *c;
  o.prototype = block.require("prototype").value;
  o.position = node_vec2(block.require("position"));
  o.heading = textio::as_double(block.require("heading"));
  o.speed = textio::as_double(block.require("speed"));
  auto [hl, hw] = textio::as_pair(block.require("footprint"));
  o.half_len = hl;
  o.half_wid = hw;
  if (const Node* t = block.find("target")) o.target = node_vec2(*t);
  return o;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Node root = textio::parse_document(text);
  textio::check_fields(root, {"mapId", "rngSeed", "ego", "obstacle"}, {"obstacle"});
  Scenario s;
  const Node* map_node = root.find("mapId");
  if (!map_node) throw ParseError(1, "missing required field 'mapId'");
  s.map_id = map_node->value;
  s.rng_seed = textio::as_u64(root.require("rngSeed"));

  const Node& ego = root.require("ego");
  textio::check_fields(ego,
                       {"position", "heading", "speed", "destination", "footprint"});
  s.ego.position = node_vec2(ego.require("position"));
  s.ego.heading = textio::as_double(ego.require("heading"));
  s.ego.speed = textio::as_double(ego.require("speed"));
  s.ego.destination = node_vec2(ego.require("destination"));
  auto [hl, hw] = textio::as_pair(ego.require("footprint"));
  s.ego.half_len = hl;
  s.ego.half_wid = hw;

  for (const Node& c : root.children)
    if (c.key == "obstacle") s.obstacles.push_back(parse_obstacle(c));
  return s;
}

std::string format_scenario(const Scenario& s) {
  textio::Writer w;
  w.field("mapId", s.map_id);
  w.field("rngSeed", s.rng_seed);
  w.open("ego");
  w.field("position", textio::fmt_double(s.ego.position.x) + " " + textio::fmt_double(s.ego.position.y));
  w.field("heading", s.ego.heading);
  w.field("speed", s.ego.speed);
  w.field("destination",
          textio::fmt_double(s.ego.destination.x) + " " + textio::fmt_double(s.ego.destination.y));
  w.field("footprint", textio::fmt_double(s.ego.half_len) + " " + textio::fmt_double(s.ego.half_wid));
  w.close();

  std::vector<const ObstacleSpec*> sorted;
  sorted.reserve(s.obstacles.size());
  for (const ObstacleSpec& o : s.obstacles) sorted.push_back(&o);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](auto* a, auto* b) { return a->id < b->id; });
  for (const ObstacleSpec* o : sorted) {
    w.open("obstacle");
    w.field("id", o->id);
    w.field("category", to_string(o->category));
    w.field("prototype", o->prototype);
    w.field("position", textio::fmt_double(o->position.x) + " " + textio::fmt_double(o->position.y));
    w.field("heading", o->heading);
    w.field("speed", o->speed);
    w.field("footprint", textio::fmt_double(o->half_len) + " " + textio::fmt_double(o->half_wid));
    if (o->target)
      w.field("target", textio::fmt_double(o->target->x) + " " + textio::fmt_double(o->target->y));
    w.close();
  }
  return w.str();
}

Scenario load_scenario(const std::string& path) {
  return parse_scenario(textio::read_file(path));
}

void save_scenario(const std::string& path, const Scenario& s) {
  textio::write_file(path, format_scenario(s));
}

}  // namespace scenefuzz
