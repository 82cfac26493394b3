#include "csf/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "csf/exact.hpp"
#include "csf/parallel.hpp"

namespace csf::curve {

namespace {
constexpr double kPi = std::numbers::pi;

Vec2 lerp(Vec2 a, Vec2 b, double w) { return a + (b - a) * w; }

// Chordal Catmull-Rom through P0..P3 evaluated at s in [t1, t2]
// (Barry-Goldman pyramid).
Vec2 catmull_rom(const Vec2 P[4], const double t[4], double s) {
  const Vec2 A1 = lerp(P[0], P[1], (s - t[0]) / (t[1] - t[0]));
  const Vec2 A2 = lerp(P[1], P[2], (s - t[1]) / (t[2] - t[1]));
  const Vec2 A3 = lerp(P[2], P[3], (s - t[2]) / (t[3] - t[2]));
  const Vec2 B1 = lerp(A1, A2, (s - t[0]) / (t[2] - t[0]));
  const Vec2 B2 = lerp(A2, A3, (s - t[1]) / (t[3] - t[1]));
  return lerp(B1, B2, (s - t[1]) / (t[2] - t[1]));
}

bool segments_properly_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = cross(d - c, a - c);
  const double d2 = cross(d - c, b - c);
  const double d3 = cross(b - a, c - a);
  const double d4 = cross(b - a, d - a);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

bool has_self_intersection(const Polyline& p) {
  const int ns = p.segment_count();
  bool found = false;
  for (int i = 0; i < ns && !found; ++i) {
    for (int j = i + 2; j < ns; ++j) {
      if (p.closed && i == 0 && j == ns - 1) continue;  // adjacent across the seam
      if (segments_properly_intersect(p.segment_a(i), p.segment_b(i), p.segment_a(j),
                                      p.segment_b(j))) {
        found = true;
        break;
      }
    }
  }
  return found;
}

// Signed area under the curve restricted to x in [x_lo, x_hi]: the line
// integral of y dx over clipped segments. For graph-like stretches traversed
// left to right this is the area under the graph; vertical arms contribute
// nothing.
double area_under(const Polyline& p, double x_lo, double x_hi) {
  double total = 0.0;
  for (int s = 0; s < p.segment_count(); ++s) {
    const Vec2 a = p.segment_a(s);
    const Vec2 b = p.segment_b(s);
    if (a.x == b.x) continue;
    const double lo = std::max(std::min(a.x, b.x), x_lo);
    const double hi = std::min(std::max(a.x, b.x), x_hi);
    if (hi <= lo) continue;
    const double ya = a.y + (b.y - a.y) * (lo - a.x) / (b.x - a.x);
    const double yb = a.y + (b.y - a.y) * (hi - a.x) / (b.x - a.x);
    const double signed_dx = (b.x > a.x) ? (hi - lo) : (lo - hi);
    total += 0.5 * (ya + yb) * signed_dx;
  }
  return total;
}

}  // namespace

std::vector<Vec2> curvature_vectors(const Polyline& p) {
  const int m = p.size();
  if (m < 3) throw std::invalid_argument("curvature_vectors: need >= 3 vertices");
  if (p.min_chord() == 0.0)
    throw std::invalid_argument("curvature_vectors: duplicate vertices");
  std::vector<Vec2> kappa(m, Vec2{0.0, 0.0});
  const int lo = p.closed ? 0 : 1;
  const int hi = p.closed ? m : m - 1;
  par::for_each(hi - lo, [&](std::ptrdiff_t idx) {
    const int i = lo + static_cast<int>(idx);
    const Vec2 dm = p.pts[i] - p.pts[(i - 1 + m) % m];
    const Vec2 dp = p.pts[(i + 1) % m] - p.pts[i];
    const double lm = dm.norm();
    const double lp = dp.norm();
    const Vec2 tm = dm * (1.0 / lm);
    const Vec2 tp = dp * (1.0 / lp);
    kappa[i] = (tp - tm) * (2.0 / (lm + lp));
  });
  return kappa;
}

double max_curvature(const Polyline& p) {
  const auto kv = curvature_vectors(p);
  double m = 0.0;
  for (const Vec2& k : kv) m = std::max(m, k.norm());
  return m;
}

double stable_dt(const Polyline& p, double dt_safety) {
  const double l = p.min_chord();
  const double k = max_curvature(p);
  double dt = l * l;
  if (k > 0.0) dt = std::min(dt, 1.0 / (k * k));
  return dt_safety * dt;
}

Polyline csf_step(const Polyline& p, double dt, const CurveFlowOptions& opts) {
  const auto kv = curvature_vectors(p);
  Polyline out = p;
  const int m = p.size();
  par::for_each(m, [&](std::ptrdiff_t i) { out.pts[i] = p.pts[i] + kv[i] * dt; });
  if (!p.closed && opts.pin_ends) {
    out.pts.front() = p.pts.front();
    out.pts.back() = p.pts.back();
  }
  return out;
}

Polyline redistribute_uniform(const Polyline& p, int m) {
  const int n = p.size();
  const int segs = p.segment_count();
  std::vector<double> s(segs + 1, 0.0);
  for (int i = 0; i < segs; ++i) s[i + 1] = s[i] + (p.segment_b(i) - p.segment_a(i)).norm();
  const double total = s[segs];

  auto vertex = [&](int i) -> Vec2 {
    if (p.closed) return p.pts[((i % n) + n) % n];
    if (i < 0) return p.pts[0] * 2.0 - p.pts[1];
    if (i >= n) return p.pts[n - 1] * 2.0 - p.pts[n - 2];
    return p.pts[i];
  };
  auto knot = [&](int i) -> double {
    if (p.closed) {
      // unwrap cyclically
      const int q = (i < 0) ? -((-i + n - 1) / n) : i / n;
      const int r = i - q * n;
      return q * total + s[r];
    }
    if (i < 0) return s[0] - (p.pts[0] - p.pts[1]).norm();
    if (i > segs) return s[segs] + (p.pts[n - 1] - p.pts[n - 2]).norm();
    return s[i];
  };

  std::vector<Vec2> out(m);
  const int samples = p.closed ? m : m - 1;
  int cell = 0;
  for (int k = 0; k < m; ++k) {
    const double target = total * static_cast<double>(k) / samples;
    while (cell < segs - 1 && s[cell + 1] < target) ++cell;
    const Vec2 P[4] = {vertex(cell - 1), vertex(cell), vertex(cell + 1), vertex(cell + 2)};
    const double T[4] = {knot(cell - 1), knot(cell), knot(cell + 1), knot(cell + 2)};
    out[k] = catmull_rom(P, T, std::clamp(target, T[1], T[2]));
  }
  if (!p.closed) {
    out.front() = p.pts.front();
    out.back() = p.pts.back();
  }
  return Polyline(std::move(out), p.closed);
}

CurveTrajectory flow_curve(const Polyline& p0, double t_end, const CurveFlowOptions& opts,
                           const std::vector<double>& snapshot_times) {
  if (opts.dt_safety <= 0.0 || opts.dt_safety > 0.5)
    throw std::invalid_argument("flow_curve: dt_safety must be in (0, 0.5]");
  std::set<double> marks(snapshot_times.begin(), snapshot_times.end());
  marks.insert(0.0);
  marks.insert(t_end);

  CurveTrajectory traj;
  traj.meta.solver = "curve-csf";
  traj.meta.chord = p0.length() / p0.segment_count();

  Polyline p = p0;
  const int m = p0.size();
  double t = 0.0;
  int step_count = 0;
  auto mark = marks.begin();
  while (mark != marks.end()) {
    if (t >= *mark - 1e-14) {
      traj.times.push_back(*mark);
      traj.states.push_back(p);
      if (!traj.meta.self_intersection && has_self_intersection(p))
        traj.meta.self_intersection = true;
      ++mark;
      continue;
    }
    double dt = stable_dt(p, opts.dt_safety);
    if (dt < 1e-14)
      throw std::runtime_error("flow_curve: curve degenerated (dt underflow) at t = " +
                               std::to_string(t));
    dt = std::min(dt, *mark - t);
    p = csf_step(p, dt, opts);
    t += dt;
    ++step_count;
    traj.meta.dt_max = std::max(traj.meta.dt_max, dt);
    if (opts.redistribute_every > 0 && step_count % opts.redistribute_every == 0)
      p = redistribute_uniform(p, m);
  }
  return traj;
}

Polyline build_local_initial_curve(const ScalarField& u0, double y_cap, int m) {
  double u_max = -std::numeric_limits<double>::infinity();
  for (double v : u0.values) u_max = std::max(u_max, v);
  if (y_cap <= u_max + 1.0)
    throw std::domain_error("build_local_initial_curve: y_cap must exceed max u0 + 1");
  if (std::abs(u0.grid.left + 1.0) > 1e-12 || std::abs(u0.grid.right - 1.0) > 1e-12)
    throw std::domain_error("build_local_initial_curve: u0 must live on (-1,1)");

  const double dx = u0.grid.dx();
  const int arm_left = std::max(2, static_cast<int>(std::ceil((y_cap - u0.values.front()) / dx)));
  const int arm_right = std::max(2, static_cast<int>(std::ceil((y_cap - u0.values.back()) / dx)));

  std::vector<Vec2> pts;
  pts.reserve(arm_left + u0.size() + arm_right);
  for (int k = 0; k <= arm_left; ++k) {
    const double y = y_cap + (u0.values.front() - y_cap) * k / arm_left;
    pts.push_back({-1.0, y});
  }
  for (int i = 1; i < u0.size() - 1; ++i) pts.push_back({u0.grid.node(i), u0.values[i]});
  for (int k = 0; k <= arm_right; ++k) {
    const double y = u0.values.back() + (y_cap - u0.values.back()) * k / arm_right;
    pts.push_back({1.0, y});
  }
  Polyline p(std::move(pts), /*closed=*/false);
  if (m > 0) p = redistribute_uniform(p, m);
  return p;
}

GraphExtract graph_extract(const Polyline& p, const Grid1D& grid, double y_max) {
  GraphExtract out;
  std::vector<double> heights(grid.n, 0.0);
  std::vector<int> counts(grid.n, 0);
  par::for_each(grid.n, [&](std::ptrdiff_t j) {
    const double x = grid.node(static_cast<int>(j));
    double h = 0.0;
    int c = 0;
    for (int s = 0; s < p.segment_count(); ++s) {
      const Vec2 a = p.segment_a(s);
      const Vec2 b = p.segment_b(s);
      if (a.x == b.x) continue;
      const double lo = std::min(a.x, b.x);
      const double hi = std::max(a.x, b.x);
      if (x < lo || x >= hi) continue;  // half-open, so shared vertices count once
      const double y = a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
      if (y < y_max) {
        h = y;
        ++c;
      }
    }
    heights[j] = h;
    counts[j] = c;
  });
  for (int j = 0; j < grid.n; ++j)
    if (counts[j] != 1) out.bad_nodes.push_back(j);
  if (!out.bad_nodes.empty()) {
    out.ok = false;
    out.message = "graph_extract: " + std::to_string(out.bad_nodes.size()) +
                  " nodes without a unique crossing (first at x = " +
                  std::to_string(grid.node(out.bad_nodes.front())) + ")";
    return out;
  }
  out.ok = true;
  out.field = ScalarField(grid, std::move(heights));
  return out;
}

Trajectory local_gcsf_solve(const ScalarField& u0, double t_end, const LocalGcsfOptions& opts) {
  for (double v : u0.values)
    if (v < -1e-12) throw std::invalid_argument("local_gcsf_solve: u0 must be >= 0");

  double u_max = 0.0;
  for (double v : u0.values) u_max = std::max(u_max, v);
  const double y_cap = opts.y_cap > 0.0 ? opts.y_cap : u_max + kPi * t_end / 2.0 + 5.0;

  Polyline gamma0 = build_local_initial_curve(u0, y_cap, opts.m);
  CurveFlowOptions copts;
  copts.dt_safety = opts.dt_safety;
  copts.redistribute_every = opts.redistribute_every;
  copts.y_cap = y_cap;
  copts.pin_ends = true;
  CurveTrajectory curves = flow_curve(gamma0, t_end, copts, opts.snapshot_times);

  const double chord = gamma0.length() / gamma0.segment_count();
  double eps = opts.eps_margin > 0.0 ? opts.eps_margin : 2.0 * chord;

  // Smallest margin (from 2 chords up) for which every snapshot extracts as a
  // single-valued graph on the shared inner grid.
  Grid1D inner;
  std::vector<ScalarField> fields;
  bool done = false;
  for (int attempt = 0; attempt < 24 && !done; ++attempt, eps *= 1.25) {
    const int auto_n = static_cast<int>(std::floor(2.0 * (1.0 - eps) / chord)) | 1;
    const int n_inner = opts.inner_n > 0 ? opts.inner_n : std::max(129, auto_n);
    inner = Grid1D(-1.0 + eps, 1.0 - eps, n_inner);
    fields.clear();
    done = true;
    for (const Polyline& p : curves.states) {
      GraphExtract ge = graph_extract(p, inner, y_cap - 1.0);
      if (!ge.ok) {
        done = false;
        break;
      }
      fields.push_back(std::move(ge.field));
    }
  }
  if (!done)
    throw std::runtime_error("local_gcsf_solve: graph extraction stayed multivalued");
  eps /= 1.25;  // undo the final loop increment

  Trajectory traj;
  traj.times = curves.times;
  traj.states = std::move(fields);
  traj.meta = curves.meta;
  traj.meta.solver = "local-gcsf";
  traj.meta.dx = inner.dx();
  traj.meta.y_cap = y_cap;
  traj.meta.eps_margin = eps;
  traj.meta.chord = chord;
  for (int k = 0; k < traj.size(); ++k) {
    const Polyline& p = curves.states[k];
    traj.meta.left_pad.push_back(area_under(p, -1.0, inner.left));
    traj.meta.right_pad.push_back(area_under(p, inner.right, 1.0));
    const double b = u_max + kPi * traj.times[k] / 2.0;
    traj.meta.tail_bound.push_back((4.0 / kPi) * std::exp(-(kPi / 2.0) * (y_cap - 1.0 - b)));
  }
  return traj;
}

int count_intersections(const Polyline& p1, const Polyline& p2, double tol) {
  if (tol <= 0.0) tol = 2.0 * std::max(p1.max_chord(), p2.max_chord());

  // Signed offset of each p1 vertex from p2 (side of the nearest segment).
  const int n = p1.size();
  std::vector<int> state(n, 0);
  par::for_each(n, [&](std::ptrdiff_t i) {
    const Vec2 q = p1.pts[i];
    double best = std::numeric_limits<double>::infinity();
    double side = 0.0;
    for (int s = 0; s < p2.segment_count(); ++s) {
      const Vec2 a = p2.segment_a(s);
      const Vec2 b = p2.segment_b(s);
      const double d = distance_point_segment(q, a, b);
      if (d < best) {
        best = d;
        side = cross(b - a, q - a);
      }
    }
    state[i] = (best < tol) ? 0 : (side > 0.0 ? 1 : -1);
  });

  int count = 0;
  int prev = 0;
  const int total = p1.closed ? n + 1 : n;
  for (int k = 0; k < total; ++k) {
    const int s = state[k % n];
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++count;
    prev = s;
  }
  return count;
}

}  // namespace csf::curve
