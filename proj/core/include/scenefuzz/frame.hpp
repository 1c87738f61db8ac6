#pragma once

#include <vector>

#include "scenefuzz/geometry.hpp"
#include "scenefuzz/scenario.hpp"

namespace scenefuzz {

// Ground-truth snapshot of one obstacle at one tick.
struct FrameObstacle {
  int id = 0;
  Category category = Category::vehicle;
  Vec2 position;
  double speed = 0.0;
  double heading = 0.0;
  double half_len = 0.0;
  double half_wid = 0.0;

  Rect rect() const { return {position, half_len, half_wid}; }
};

// One ground-truth frame. Contains exactly the obstacles within sensor
// range of the ego at that tick.
struct Frame {
  int index = 0;
  double timestamp = 0.0;
  std::vector<FrameObstacle> obstacles;

  const FrameObstacle* by_id(int id) const {
    for (const FrameObstacle& o : obstacles)
      if (o.id == id) return &o;
    return nullptr;
  }
};

}  // namespace scenefuzz
