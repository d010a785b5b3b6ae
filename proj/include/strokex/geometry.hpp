#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace strokex {

// Image coordinates: x grows right, y grows down.
struct Point {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Point&, const Point&) = default;
};

// Row-major ordering: by y, then x.
inline bool raster_less(const Point& a, const Point& b) {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

struct PointF {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const PointF&, const PointF&) = default;
};

// Halves round down: 4.5 -> 4, -0.5 -> -1.
inline int round_half_down(double v) { return static_cast<int>(std::ceil(v - 0.5)); }

inline Point round_point(const PointF& p) {
  return {round_half_down(p.x), round_half_down(p.y)};
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }
  Vec2 normalized() const {
    const double n = norm();
    return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
  }
  Vec2 operator-() const { return {-x, -y}; }
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

// Angle in [0, pi] between two nonzero vectors.
inline double angle_between(const Vec2& a, const Vec2& b) {
  const double c = std::clamp(dot(a.normalized(), b.normalized()), -1.0, 1.0);
  return std::acos(c);
}

struct BBox {
  int min_x = std::numeric_limits<int>::max();
  int min_y = std::numeric_limits<int>::max();
  int max_x = std::numeric_limits<int>::min();
  int max_y = std::numeric_limits<int>::min();

  void expand(const Point& p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  bool valid() const { return min_x <= max_x && min_y <= max_y; }
  friend bool operator==(const BBox&, const BBox&) = default;
};

// Closed intervals; touching endpoints count as intersecting.
inline bool intervals_intersect(int lo_a, int hi_a, int lo_b, int hi_b) {
  return lo_a <= hi_b && lo_b <= hi_a;
}

// An ordered run of pen positions; the unit of extraction output.
struct Stroke {
  std::vector<Point> points;

  BBox bbox() const {
    BBox b;
    for (const Point& p : points) b.expand(p);
    return b;
  }
  friend bool operator==(const Stroke&, const Stroke&) = default;
};

// Raised when a pipeline stage observes state that earlier stages promise
// cannot occur; signals a bug, not bad input.
struct InternalConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace strokex
