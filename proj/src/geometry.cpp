#include "csf/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "csf/parallel.hpp"

namespace csf {

Polyline::Polyline(std::vector<Vec2> p, bool closed_) : pts(std::move(p)), closed(closed_) {
  if (static_cast<int>(pts.size()) < 2) throw std::invalid_argument("Polyline: need >= 2 vertices");
  if (closed && (pts.front().x == pts.back().x && pts.front().y == pts.back().y))
    throw std::invalid_argument("Polyline: closed curves must not repeat the first vertex");
}

double Polyline::length() const {
  double s = 0.0;
  for (int i = 0; i < segment_count(); ++i) s += (segment_b(i) - segment_a(i)).norm();
  return s;
}

double Polyline::min_chord() const {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < segment_count(); ++i)
    m = std::min(m, (segment_b(i) - segment_a(i)).norm());
  return m;
}

double Polyline::max_chord() const {
  double m = 0.0;
  for (int i = 0; i < segment_count(); ++i)
    m = std::max(m, (segment_b(i) - segment_a(i)).norm());
  return m;
}

double distance_point_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

namespace {
double one_sided_hausdorff(const Polyline& p, const Polyline& q) {
  return par::max(p.size(), [&](std::ptrdiff_t i) {
    double d = std::numeric_limits<double>::infinity();
    for (int s = 0; s < q.segment_count(); ++s)
      d = std::min(d, distance_point_segment(p.pts[i], q.segment_a(s), q.segment_b(s)));
    return d;
  });
}
}  // namespace

double min_distance(const Polyline& p, const Polyline& q) {
  return par::min(p.size(), [&](std::ptrdiff_t i) {
    double d = std::numeric_limits<double>::infinity();
    for (int s = 0; s < q.segment_count(); ++s)
      d = std::min(d, distance_point_segment(p.pts[i], q.segment_a(s), q.segment_b(s)));
    return d;
  });
}

double hausdorff_distance(const Polyline& p, const Polyline& q) {
  return std::max(one_sided_hausdorff(p, q), one_sided_hausdorff(q, p));
}

}  // namespace csf
