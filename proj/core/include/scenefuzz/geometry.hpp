#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace scenefuzz {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline double manhattan(Vec2 a, Vec2 b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}
inline Vec2 normalized(Vec2 a) {
  double n = norm(a);
  return n > 0.0 ? Vec2{a.x / n, a.y / n} : Vec2{};
}
inline Vec2 heading_vec(double heading) {
  return {std::cos(heading), std::sin(heading)};
}

// Wraps an angle into [0, 2*pi).
inline double normalize_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a < 0.0) a += two_pi;
  if (a >= two_pi) a = 0.0;  // fmod rounding can land exactly on 2*pi
  return a;
}

// Axis-aligned rectangle: center plus half extents along x and y.
struct Rect {
  Vec2 center;
  double half_len = 0.0;  // x
  double half_wid = 0.0;  // y
};

// Strict-interior test: rectangles that merely share an edge or corner do
// not overlap.
inline bool overlaps(const Rect& a, const Rect& b) {
  return std::abs(a.center.x - b.center.x) < a.half_len + b.half_len &&
         std::abs(a.center.y - b.center.y) < a.half_wid + b.half_wid;
}

inline bool contains_point(const Rect& r, Vec2 p) {
  return std::abs(p.x - r.center.x) <= r.half_len &&
         std::abs(p.y - r.center.y) <= r.half_wid;
}

// Whole inner rectangle inside the outer one (touching the border is fine).
inline bool contains_rect(const Rect& outer, const Rect& inner) {
  return std::abs(inner.center.x - outer.center.x) + inner.half_len <= outer.half_len &&
         std::abs(inner.center.y - outer.center.y) + inner.half_wid <= outer.half_wid;
}

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 ab = b - a;
  double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

inline double point_polyline_distance(Vec2 p, const std::vector<Vec2>& line) {
  if (line.empty()) return std::numeric_limits<double>::infinity();
  if (line.size() == 1) return distance(p, line[0]);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.size(); ++i)
    best = std::min(best, point_segment_distance(p, line[i], line[i + 1]));
  return best;
}

}  // namespace scenefuzz
