#pragma once

#include <cmath>
#include <vector>

namespace csf {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// Ordered planar vertex list. For closed curves the first vertex is not
// repeated; the closing segment is implicit.
struct Polyline {
  std::vector<Vec2> pts;
  bool closed = false;

  Polyline() = default;
  Polyline(std::vector<Vec2> p, bool closed_);

  int size() const { return static_cast<int>(pts.size()); }
  int segment_count() const { return closed ? size() : size() - 1; }
  Vec2 segment_a(int s) const { return pts[s]; }
  Vec2 segment_b(int s) const { return pts[(s + 1) % size()]; }
  double length() const;
  double min_chord() const;
  double max_chord() const;
};

double distance_point_segment(Vec2 p, Vec2 a, Vec2 b);
double min_distance(const Polyline& p, const Polyline& q);
double hausdorff_distance(const Polyline& p, const Polyline& q);

}  // namespace csf
