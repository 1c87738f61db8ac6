#pragma once

// Shared fixture builders for the unit tests.

#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>

#include "scenefuzz/perception.hpp"
#include "scenefuzz/scenario.hpp"
#include "scenefuzz/simulator.hpp"

namespace testutil {

using namespace scenefuzz;

// Ego parked mid-map pointing east with a far destination.
inline Scenario base_scenario() {
  Scenario s;
  s.map_id = "two_lane";
  s.rng_seed = 42;
  s.ego.position = {0.0, -1.75};
  s.ego.heading = 0.0;
  s.ego.speed = 5.0;
  s.ego.destination = {200.0, -1.75};
  return s;
}

inline ObstacleSpec make_obstacle(int id, std::string_view proto, Vec2 pos,
                                  double heading = 0.0, double speed = 0.0) {
  const Prototype* p = find_prototype(proto);
  if (p == nullptr) throw std::runtime_error("unknown prototype in fixture");
  ObstacleSpec o;
  o.id = id;
  o.category = p->category;
  o.prototype = std::string(proto);
  o.position = pos;
  o.heading = heading;
  o.speed = speed;
  o.half_len = p->half_len;
  o.half_wid = p->half_wid;
  return o;
}

inline DetectorStack perfect_stack() {
  return DetectorStack::plain(DetectorProfile::perfect());
}

// Unique scratch directory under the build tree; removed by the caller.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("scenefuzz_test_" + tag + "_" + std::to_string(counter_++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& rel = "") const {
    return rel.empty() ? path_.string() : (path_ / rel).string();
  }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

}  // namespace testutil
