#include "scenefuzz/mutation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scenefuzz/errors.hpp"
#include "scenefuzz/textio.hpp"

namespace scenefuzz {

const char* to_string(MutationKind k) {
  switch (k) {
    case MutationKind::add: return "add";
    case MutationKind::remove: return "remove";
    case MutationKind::swap: return "swap";
    case MutationKind::move: return "move";
    case MutationKind::modify_velocity: return "modifyVelocity";
    case MutationKind::rotate: return "rotate";
  }
  return "?";
}

std::optional<MutationKind> mutation_kind_from_string(std::string_view s) {
  for (MutationKind k :
       {MutationKind::add, MutationKind::remove, MutationKind::swap,
        MutationKind::move, MutationKind::modify_velocity, MutationKind::rotate})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

const char* to_string(MoveDirection d) {
  switch (d) {
    case MoveDirection::north: return "north";
    case MoveDirection::south: return "south";
    case MoveDirection::east: return "east";
    case MoveDirection::west: return "west";
  }
  return "?";
}

std::string describe(const MutationOp& op) {
  std::string out = to_string(op.kind);
  switch (op.kind) {
    case MutationKind::add: {
      const auto& p = std::get<AddParams>(op.params);
      out += " id=" + textio::fmt_i64(p.obstacle.id) + " " + p.obstacle.prototype +
             " at (" + textio::fmt_double(p.obstacle.position.x) + ", " +
             textio::fmt_double(p.obstacle.position.y) + ")";
      break;
    }
    case MutationKind::remove:
      out += " id=" + textio::fmt_i64(std::get<RemoveParams>(op.params).id);
      break;
    case MutationKind::swap: {
      const auto& p = std::get<SwapParams>(op.params);
      out += " id=" + textio::fmt_i64(p.id_a) + " id=" + textio::fmt_i64(p.id_b);
      break;
    }
    case MutationKind::move: {
      const auto& p = std::get<MoveParams>(op.params);
      out += " id=" + textio::fmt_i64(p.id) + " " + to_string(p.direction);
      break;
    }
    case MutationKind::modify_velocity: {
      const auto& p = std::get<ModifyVelocityParams>(op.params);
      out += " id=" + textio::fmt_i64(p.id) +
             " speed=" + textio::fmt_double(p.speed);
      break;
    }
    case MutationKind::rotate: {
      const auto& p = std::get<RotateParams>(op.params);
      out += " id=" + textio::fmt_i64(p.id) +
             " delta=" + textio::fmt_double(p.delta);
      break;
    }
  }
  return out;
}

std::vector<MutationKind> applicable_kinds(const Scenario& s) {
  std::vector<MutationKind> kinds;
  std::size_t n = s.obstacles.size();
  if (n < static_cast<std::size_t>(kMaxObstacles)) kinds.push_back(MutationKind::add);
  if (n >= 1) kinds.push_back(MutationKind::remove);
  if (n >= 2) kinds.push_back(MutationKind::swap);
  if (n >= 1) kinds.push_back(MutationKind::move);
  if (n >= 1) kinds.push_back(MutationKind::modify_velocity);
  if (n >= 1) kinds.push_back(MutationKind::rotate);
  return kinds;
}

MutationKind sample_kind(const Scenario& s, Rng& rng) {
  auto kinds = applicable_kinds(s);
  if (kinds.empty()) throw MutationError("no applicable mutation");
  return kinds[rng.pick_index(kinds.size())];
}

ObstacleSpec sample_obstacle(const Scenario& s, const MapSpec& map, Rng& rng,
                             int id) {
  auto protos = prototypes();
  const Prototype& proto = protos[rng.pick_index(protos.size())];

  // Area-uniform draw over the ring around the ego.
  double r2 = rng.uniform(kAddRingMin * kAddRingMin, kAddRingMax * kAddRingMax);
  double r = std::sqrt(r2);
  double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);

  ObstacleSpec o;
  o.id = id;
  o.category = proto.category;
  o.prototype = std::string(proto.name);
  o.position = s.ego.position + Vec2{r * std::cos(theta), r * std::sin(theta)};
  o.heading = normalize_angle(rng.uniform(0.0, 2.0 * std::numbers::pi));
  o.speed = rng.uniform(0.0, max_speed(proto.category));
  o.half_len = proto.half_len;
  o.half_wid = proto.half_wid;
  if (rng.chance(0.5)) {
    const Rect& d = map.drivable;
    o.target = Vec2{rng.uniform(d.center.x - d.half_len, d.center.x + d.half_len),
                    rng.uniform(d.center.y - d.half_wid, d.center.y + d.half_wid)};
  }
  return o;
}

namespace {

int pick_obstacle_id(const Scenario& s, Rng& rng) {
  return s.obstacles[rng.pick_index(s.obstacles.size())].id;
}

ObstacleSpec* find_mut(Scenario& s, int id) {
  for (ObstacleSpec& o : s.obstacles)
    if (o.id == id) return &o;
  return nullptr;
}

ApplyResult fail(std::string reason) { return {std::nullopt, std::move(reason)}; }

ApplyResult finish(Scenario scenario, const MapSpec& map,
                   std::initializer_list<int> placed_ids) {
  for (int id : placed_ids) {
    const ObstacleSpec* o = scenario.obstacle_by_id(id);
    if (!contains_rect(map.drivable, o->rect()))
      return fail("id=" + textio::fmt_i64(id) + " outside drivable region");
  }
  auto violations = validate(scenario);
  if (!violations.empty()) return fail(violations.front().message);
  return {std::move(scenario), {}};
}

}  // namespace

MutationOp sample_operator(const Scenario& s, const MapSpec& map,
                           MutationKind kind, Rng& rng) {
  auto kinds = applicable_kinds(s);
  if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
    throw MutationError(std::string("mutation '") + to_string(kind) +
                        "' not applicable here");
  MutationOp op;
  op.kind = kind;
  switch (kind) {
    case MutationKind::add:
      op.params =
          AddParams{sample_obstacle(s, map, rng, s.max_obstacle_id() + 1)};
      break;
    case MutationKind::remove:
      op.params = RemoveParams{pick_obstacle_id(s, rng)};
      break;
    case MutationKind::swap: {
      std::size_t n = s.obstacles.size();
      int i = rng.pick_index(n);
      int j = rng.pick_index(n - 1);
      if (j >= i) ++j;
      op.params = SwapParams{s.obstacles[i].id, s.obstacles[j].id};
      break;
    }
    case MutationKind::move: {
      int id = pick_obstacle_id(s, rng);
      auto dir = static_cast<MoveDirection>(rng.pick_index(4));
      op.params = MoveParams{id, dir};
      break;
    }
    case MutationKind::modify_velocity: {
      int id = pick_obstacle_id(s, rng);
      double speed = rng.uniform(0.0, max_speed(s.obstacle_by_id(id)->category));
      op.params = ModifyVelocityParams{id, speed};
      break;
    }
    case MutationKind::rotate: {
      int id = pick_obstacle_id(s, rng);
      double delta =
          rng.chance(0.5) ? std::numbers::pi / 2.0 : -std::numbers::pi / 2.0;
      op.params = RotateParams{id, delta};
      break;
    }
  }
  return op;
}

ApplyResult apply_op(const Scenario& s, const MapSpec& map,
                     const MutationOp& op) {
  Scenario out = s;
  switch (op.kind) {
    case MutationKind::add: {
      const auto& p = std::get<AddParams>(op.params);
      if (out.obstacle_by_id(p.obstacle.id))
        return fail("duplicate id " + textio::fmt_i64(p.obstacle.id));
      out.obstacles.push_back(p.obstacle);
      return finish(std::move(out), map, {p.obstacle.id});
    }
    case MutationKind::remove: {
      int id = std::get<RemoveParams>(op.params).id;
      auto it = std::find_if(out.obstacles.begin(), out.obstacles.end(),
                             [&](const ObstacleSpec& o) { return o.id == id; });
      if (it == out.obstacles.end())
        return fail("no obstacle with id " + textio::fmt_i64(id));
      out.obstacles.erase(it);
      return finish(std::move(out), map, {});
    }
    case MutationKind::swap: {
      const auto& p = std::get<SwapParams>(op.params);
      ObstacleSpec* a = find_mut(out, p.id_a);
      ObstacleSpec* b = find_mut(out, p.id_b);
      if (!a || !b || a == b) return fail("bad swap pair");
      std::swap(a->position, b->position);
      return finish(std::move(out), map, {p.id_a, p.id_b});
    }
    case MutationKind::move: {
      const auto& p = std::get<MoveParams>(op.params);
      ObstacleSpec* o = find_mut(out, p.id);
      if (!o) return fail("no obstacle with id " + textio::fmt_i64(p.id));
      switch (p.direction) {
        case MoveDirection::north: o->position.y += kMoveStep; break;
        case MoveDirection::south: o->position.y -= kMoveStep; break;
        case MoveDirection::east: o->position.x += kMoveStep; break;
        case MoveDirection::west: o->position.x -= kMoveStep; break;
      }
      return finish(std::move(out), map, {p.id});
    }
    case MutationKind::modify_velocity: {
      const auto& p = std::get<ModifyVelocityParams>(op.params);
      ObstacleSpec* o = find_mut(out, p.id);
      if (!o) return fail("no obstacle with id " + textio::fmt_i64(p.id));
      o->speed = p.speed;
      return finish(std::move(out), map, {});
    }
    case MutationKind::rotate: {
      const auto& p = std::get<RotateParams>(op.params);
      ObstacleSpec* o = find_mut(out, p.id);
      if (!o) return fail("no obstacle with id " + textio::fmt_i64(p.id));
      o->heading = normalize_angle(o->heading + p.delta);
      return finish(std::move(out), map, {});
    }
  }
  return fail("unknown mutation kind");
}

Scenario mutate(const Scenario& s, const MapSpec& map, MutationKind kind,
                Rng& rng, MutationOp* applied) {
  auto kinds = applicable_kinds(s);
  if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
    throw MutationError(std::string("mutation '") + to_string(kind) +
                        "' not applicable here");
  std::string last_reason;
  for (int attempt = 0; attempt < kMaxPlacementTries; ++attempt) {
    MutationOp op = sample_operator(s, map, kind, rng);
    ApplyResult res = apply_op(s, map, op);
    if (res.scenario) {
      if (applied) *applied = op;
      return std::move(*res.scenario);
    }
    last_reason = res.reason;
  }
  throw MutationError(std::string("mutation '") + to_string(kind) +
                      "' failed after " + textio::fmt_i64(kMaxPlacementTries) +
                      " placement attempts (" + last_reason + ")");
}

Scenario mutate(const Scenario& s, const MapSpec& map, Rng& rng,
                MutationOp* applied) {
  return mutate(s, map, sample_kind(s, rng), rng, applied);
}

EgoSpec default_ego(const MapSpec& map) {
  EgoSpec ego;
  if (!map.lanes.empty()) {
    const LaneSegment& lane = map.lanes.front();
    Vec2 dir = normalized(lane.end - lane.start);
    ego.position = lane.start + dir * 5.0;
    ego.destination = lane.end - dir * 5.0;
    ego.heading = normalize_angle(std::atan2(dir.y, dir.x));
  } else {
    ego.position = map.drivable.center;
    ego.destination = ego.position + Vec2{map.drivable.half_len - 1.0, 0.0};
  }
  ego.speed = 0.0;
  return ego;
}

std::vector<Scenario> make_initial_seeds(const MapSpec& map, int count,
                                         std::uint64_t seed) {
  std::vector<Scenario> out;
  for (int i = 0; i < count; ++i) {
    Rng rng(hash_combine(seed, static_cast<std::uint64_t>(i)));
    Scenario s;
    s.map_id = map.id;
    s.rng_seed = rng.next_u64();
    s.ego = default_ego(map);
    int want = 2 + rng.pick_index(4);
    for (int k = 0; k < want; ++k) {
      for (int attempt = 0; attempt < kMaxPlacementTries; ++attempt) {
        ObstacleSpec cand =
            sample_obstacle(s, map, rng, s.max_obstacle_id() + 1);
        MutationOp op{MutationKind::add, AddParams{cand}};
        ApplyResult res = apply_op(s, map, op);
        if (res.scenario) {
          s = std::move(*res.scenario);
          break;
        }
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace scenefuzz
