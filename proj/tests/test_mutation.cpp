#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "helpers.hpp"
#include "scenefuzz/errors.hpp"
#include "scenefuzz/mutation.hpp"
#include "scenefuzz/rng.hpp"

using namespace scenefuzz;
using testutil::base_scenario;
using testutil::make_obstacle;

namespace {

const MapSpec& two_lane() { return map_by_id("two_lane"); }

Scenario with_n_obstacles(int n) {
  Scenario s = base_scenario();
  for (int i = 1; i <= n; ++i)
    s.obstacles.push_back(make_obstacle(i, "pedestrian_adult", {10.0 + 2.0 * i, 5.0}));
  return s;
}

}  // namespace

TEST_CASE("mutation kind names round-trip") {
  for (MutationKind k : {MutationKind::add, MutationKind::remove, MutationKind::swap,
                         MutationKind::move, MutationKind::modify_velocity,
                         MutationKind::rotate}) {
    auto back = mutation_kind_from_string(to_string(k));
    REQUIRE(back.has_value());
    CHECK(*back == k);
  }
  CHECK(!mutation_kind_from_string("teleport").has_value());
  CHECK(std::string(to_string(MutationKind::modify_velocity)) == "modifyVelocity");
}

TEST_CASE("applicable kinds depend on the obstacle count") {
  auto kinds_of = [](const Scenario& s) {
    auto v = applicable_kinds(s);
    return std::set<MutationKind>(v.begin(), v.end());
  };
  auto empty_kinds = kinds_of(with_n_obstacles(0));
  CHECK(empty_kinds == std::set<MutationKind>{MutationKind::add});

  auto one = kinds_of(with_n_obstacles(1));
  CHECK(one.count(MutationKind::add) == 1);
  CHECK(one.count(MutationKind::swap) == 0);
  CHECK(one.count(MutationKind::remove) == 1);
  CHECK(one.count(MutationKind::move) == 1);
  CHECK(one.count(MutationKind::modify_velocity) == 1);
  CHECK(one.count(MutationKind::rotate) == 1);

  auto two = kinds_of(with_n_obstacles(2));
  CHECK(two.size() == 6);

  auto full = kinds_of(with_n_obstacles(kMaxObstacles));
  CHECK(full.count(MutationKind::add) == 0);
  CHECK(full.size() == 5);
}

TEST_CASE("sampled obstacles stay in the ring with consistent fields") {
  Scenario s = base_scenario();
  Rng rng(99);
  int with_target = 0;
  double sum_r2 = 0.0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    ObstacleSpec o = sample_obstacle(s, two_lane(), rng, 7);
    CHECK(o.id == 7);
    double r = distance(o.position, s.ego.position);
    CHECK(r >= kAddRingMin);
    CHECK(r <= kAddRingMax);
    sum_r2 += r * r;
    const Prototype* p = find_prototype(o.prototype);
    REQUIRE(p != nullptr);
    CHECK(o.category == p->category);
    CHECK(o.half_len == p->half_len);
    CHECK(o.half_wid == p->half_wid);
    CHECK(o.heading >= 0.0);
    CHECK(o.heading < 2.0 * std::numbers::pi);
    CHECK(o.speed >= 0.0);
    CHECK(o.speed <= max_speed(o.category));
    if (o.target) {
      ++with_target;
      CHECK(contains_point(two_lane().drivable, *o.target));
    }
  }
  // Destination probability one half.
  CHECK(with_target > n * 0.45);
  CHECK(with_target < n * 0.55);
  // Area-uniform placement means r^2 is uniform on [min^2, max^2]; its mean
  // is the midpoint 1802. Sampling error at n=4000 is ~16, so 5% is hugely
  // conservative.
  double mean_r2 = sum_r2 / n;
  double expect = (kAddRingMin * kAddRingMin + kAddRingMax * kAddRingMax) / 2.0;
  CHECK(mean_r2 > expect * 0.95);
  CHECK(mean_r2 < expect * 1.05);
}

TEST_CASE("add mutation appends one obstacle with the next id") {
  Scenario s = with_n_obstacles(2);
  s.obstacles[1].id = 9;  // gap in the id space
  Rng rng(5);
  MutationOp op;
  Scenario child = mutate(s, two_lane(), MutationKind::add, rng, &op);
  CHECK(op.kind == MutationKind::add);
  const auto& p = std::get<AddParams>(op.params);
  CHECK(p.obstacle.id == 10);  // max id 9, plus one
  REQUIRE(child.obstacles.size() == 3);
  CHECK(child.obstacle_by_id(10) != nullptr);
  CHECK(validate(child).empty());
  CHECK(contains_rect(two_lane().drivable, child.obstacle_by_id(10)->rect()));
  // Parent rows untouched.
  CHECK(child.obstacles[0].position == s.obstacles[0].position);
  CHECK(child.obstacles[1].position == s.obstacles[1].position);
  // Child inherits the parent's behaviour seed.
  CHECK(child.rng_seed == s.rng_seed);
}

TEST_CASE("remove mutation drops exactly one obstacle") {
  Scenario s = with_n_obstacles(3);
  Rng rng(6);
  MutationOp op;
  Scenario child = mutate(s, two_lane(), MutationKind::remove, rng, &op);
  int removed = std::get<RemoveParams>(op.params).id;
  CHECK(s.obstacle_by_id(removed) != nullptr);
  CHECK(child.obstacles.size() == 2);
  CHECK(child.obstacle_by_id(removed) == nullptr);
}

TEST_CASE("swap exchanges positions and nothing else") {
  Scenario s = base_scenario();
  s.obstacles.push_back(make_obstacle(1, "sedan", {30.0, -1.75}, 0.25, 8.0));
  s.obstacles.push_back(make_obstacle(2, "deer", {60.0, 5.0}, 1.5, 1.0));
  MutationOp op{MutationKind::swap, SwapParams{1, 2}};
  ApplyResult res = apply_op(s, two_lane(), op);
  REQUIRE(res.scenario.has_value());
  const Scenario& c = *res.scenario;
  CHECK(c.obstacle_by_id(1)->position == Vec2{60.0, 5.0});
  CHECK(c.obstacle_by_id(2)->position == Vec2{30.0, -1.75});
  CHECK(c.obstacle_by_id(1)->heading == 0.25);
  CHECK(c.obstacle_by_id(1)->speed == 8.0);
  CHECK(c.obstacle_by_id(1)->prototype == "sedan");
  CHECK(c.obstacle_by_id(2)->heading == 1.5);
  CHECK(c.obstacle_by_id(2)->prototype == "deer");
}

TEST_CASE("move steps exactly one metre along an axis") {
  Scenario s = with_n_obstacles(1);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Rng rng(seed);
    MutationOp op;
    Scenario child = mutate(s, two_lane(), MutationKind::move, rng, &op);
    const auto& p = std::get<MoveParams>(op.params);
    Vec2 before = s.obstacle_by_id(p.id)->position;
    Vec2 after = child.obstacle_by_id(p.id)->position;
    Vec2 delta = after - before;
    CHECK(std::abs(delta.x) + std::abs(delta.y) == kMoveStep);
    CHECK((delta.x == 0.0 || delta.y == 0.0));
  }
}

TEST_CASE("velocity mutation respects the category ceiling") {
  Scenario s = base_scenario();
  s.obstacles.push_back(make_obstacle(1, "pedestrian_adult", {30.0, 5.0}));
  s.obstacles.push_back(make_obstacle(2, "sedan", {60.0, -1.75}));
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    Rng rng(seed);
    MutationOp op;
    Scenario child = mutate(s, two_lane(), MutationKind::modify_velocity, rng, &op);
    const auto& p = std::get<ModifyVelocityParams>(op.params);
    const ObstacleSpec* o = child.obstacle_by_id(p.id);
    CHECK(o->speed == p.speed);
    CHECK(o->speed >= 0.0);
    CHECK(o->speed <= max_speed(o->category));
  }
}

TEST_CASE("rotation turns a quarter circle either way") {
  Scenario s = base_scenario();
  s.obstacles.push_back(make_obstacle(1, "sedan", {30.0, -1.75}, 0.0));

  MutationOp left{MutationKind::rotate, RotateParams{1, std::numbers::pi / 2.0}};
  ApplyResult res = apply_op(s, two_lane(), left);
  REQUIRE(res.scenario.has_value());
  CHECK(res.scenario->obstacle_by_id(1)->heading ==
        doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-12));

  MutationOp right{MutationKind::rotate, RotateParams{1, -std::numbers::pi / 2.0}};
  res = apply_op(s, two_lane(), right);
  REQUIRE(res.scenario.has_value());
  CHECK(res.scenario->obstacle_by_id(1)->heading ==
        doctest::Approx(3.0 * std::numbers::pi / 2.0).epsilon(1e-12));

  // Sampled rotations are always +-pi/2.
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    Rng rng(seed);
    MutationOp op = sample_operator(s, two_lane(), MutationKind::rotate, rng);
    CHECK(std::abs(std::get<RotateParams>(op.params).delta) ==
          std::numbers::pi / 2.0);
  }
}

TEST_CASE("rotation cannot fail placement for a footprint near the border") {
  // The drivable-region check uses the axis-aligned footprint, which a
  // rotation does not change, so even a long vehicle flush against the
  // boundary may turn in place.
  Scenario s = base_scenario();
  s.obstacles.push_back(make_obstacle(1, "boxtruck", {206.6, 0.0}));  // touches x = 210
  REQUIRE(validate(s).empty());
  MutationOp op{MutationKind::rotate, RotateParams{1, std::numbers::pi / 2.0}};
  CHECK(apply_op(s, two_lane(), op).scenario.has_value());
}

TEST_CASE("apply reports failure reasons instead of throwing") {
  Scenario s = with_n_obstacles(2);
  const MapSpec& map = two_lane();

  ApplyResult missing = apply_op(s, map, {MutationKind::remove, RemoveParams{42}});
  CHECK(!missing.scenario.has_value());
  CHECK(!missing.reason.empty());

  ApplyResult self_swap = apply_op(s, map, {MutationKind::swap, SwapParams{1, 1}});
  CHECK(!self_swap.scenario.has_value());

  ObstacleSpec outside = make_obstacle(3, "sedan", {500.0, 0.0});
  ApplyResult off_map = apply_op(s, map, {MutationKind::add, AddParams{outside}});
  CHECK(!off_map.scenario.has_value());
  CHECK(off_map.reason.find("drivable") != std::string::npos);

  ObstacleSpec dup = make_obstacle(1, "sedan", {100.0, -1.75});
  CHECK(!apply_op(s, map, {MutationKind::add, AddParams{dup}}).scenario.has_value());

  ObstacleSpec on_ego = make_obstacle(3, "sedan", s.ego.position);
  ApplyResult clash = apply_op(s, map, {MutationKind::add, AddParams{on_ego}});
  CHECK(!clash.scenario.has_value());
  CHECK(clash.reason.find("ego") != std::string::npos);
}

TEST_CASE("inapplicable mutations throw") {
  Scenario empty = base_scenario();
  Rng rng(1);
  CHECK_THROWS_AS(mutate(empty, two_lane(), MutationKind::remove, rng), MutationError);
  CHECK_THROWS_AS(mutate(empty, two_lane(), MutationKind::swap, rng), MutationError);
  Scenario one = with_n_obstacles(1);
  CHECK_THROWS_AS(mutate(one, two_lane(), MutationKind::swap, rng), MutationError);
  Scenario full = with_n_obstacles(kMaxObstacles);
  CHECK_THROWS_AS(mutate(full, two_lane(), MutationKind::add, rng), MutationError);
}

TEST_CASE("placement exhaustion throws after bounded retries") {
  // A map so small that the add ring (>= 2 m from the ego) lies entirely
  // outside the drivable square, so every placement attempt fails.
  MapSpec tiny;
  tiny.id = "tiny";
  tiny.drivable = {{0.0, 0.0}, 1.0, 1.0};
  Scenario s;
  s.map_id = "tiny";
  s.ego.position = {0.0, 0.0};
  s.ego.destination = {0.5, 0.0};
  Rng rng(3);
  CHECK_THROWS_AS(mutate(s, tiny, MutationKind::add, rng), MutationError);
}

TEST_CASE("uniform kind selection covers every applicable kind") {
  Scenario s = with_n_obstacles(3);
  Rng rng(17);
  std::set<MutationKind> seen;
  for (int i = 0; i < 300; ++i) seen.insert(sample_kind(s, rng));
  CHECK(seen.size() == 6);
}

TEST_CASE("mutation descriptions are stable one-liners") {
  CHECK(describe({MutationKind::remove, RemoveParams{4}}) == "remove id=4");
  CHECK(describe({MutationKind::swap, SwapParams{1, 2}}) == "swap id=1 id=2");
  CHECK(describe({MutationKind::move, MoveParams{3, MoveDirection::north}}) ==
        "move id=3 north");
  CHECK(describe({MutationKind::modify_velocity, ModifyVelocityParams{2, 2.5}}) ==
        "modifyVelocity id=2 speed=2.5");
  ObstacleSpec o = make_obstacle(5, "deer", {10.0, 2.5});
  CHECK(describe({MutationKind::add, AddParams{o}}) ==
        "add id=5 deer at (10, 2.5)");
}

TEST_CASE("default ego sits just inside the first lane") {
  EgoSpec ego = default_ego(two_lane());
  CHECK(ego.position == Vec2{-5.0, -1.75});
  CHECK(ego.destination == Vec2{205.0, -1.75});
  CHECK(ego.heading == 0.0);
  CHECK(ego.speed == 0.0);
  CHECK(ego.half_len == 2.3);
  CHECK(ego.half_wid == 1.1);
}

TEST_CASE("initial seed population is deterministic and valid") {
  auto seeds = make_initial_seeds(two_lane(), 4, 77);
  REQUIRE(seeds.size() == 4);
  std::set<std::uint64_t> behaviour_seeds;
  for (const Scenario& s : seeds) {
    CHECK(s.map_id == "two_lane");
    CHECK(validate(s).empty());
    CHECK(s.obstacles.size() >= 2);
    CHECK(s.obstacles.size() <= 5);
    behaviour_seeds.insert(s.rng_seed);
    for (const ObstacleSpec& o : s.obstacles)
      CHECK(contains_rect(two_lane().drivable, o.rect()));
  }
  CHECK(behaviour_seeds.size() == 4);  // per-seed streams differ

  auto again = make_initial_seeds(two_lane(), 4, 77);
  for (int i = 0; i < 4; ++i)
    CHECK(format_scenario(again[i]) == format_scenario(seeds[i]));

  auto other = make_initial_seeds(two_lane(), 4, 78);
  CHECK(format_scenario(other[0]) != format_scenario(seeds[0]));
}
