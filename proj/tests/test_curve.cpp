#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <numbers>

#include "csf/curve.hpp"
#include "csf/exact.hpp"

using namespace csf;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double a, double b, double fa, double fb, double fc, double whole,
          int depth) -> double {
    const double c = 0.5 * (a + b);
    const double d = 0.5 * (a + c), e = 0.5 * (c + b);
    const double fd = f(d), fe = f(e);
    const double left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    const double right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return rec(a, c, fa, fc, fd, left, depth - 1) + rec(c, b, fc, fb, fe, right, depth - 1);
  };
  const double c = 0.5 * (a + b);
  return rec(a, b, f(a), f(b), f(c), (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b)), 28);
}
}  // namespace

TEST_CASE("curvature of a straight line vanishes") {
  std::vector<Vec2> pts;
  for (int i = 0; i <= 10; ++i) pts.push_back({0.1 * i, 0.2 * i});
  const auto kv = curve::curvature_vectors(Polyline(std::move(pts), false));
  for (const auto& k : kv) CHECK(k.norm() == Approx(0.0).margin(1e-14));
}

TEST_CASE("curvature of a regular polygon matches the circle") {
  const Polyline circle = *exact::shrinking_circle({0, 0}, 1.0, 0.0, 256);
  const auto kv = curve::curvature_vectors(circle);
  for (const auto& k : kv) CHECK(std::abs(k.norm() - 1.0) < 1e-3);
  // vectors point at the centre
  for (int i = 0; i < circle.size(); ++i) {
    const Vec2 inward = circle.pts[i] * -1.0;
    CHECK(dot(kv[i], inward) > 0.0);
  }
}

TEST_CASE("curvature at the grim reaper apex is pi/2") {
  std::vector<Vec2> pts;
  for (int i = -300; i <= 300; ++i) {
    const double x = 1e-3 * i;
    pts.push_back({x, exact::grim_reaper(x, 0.0, 0.0)});
  }
  const Polyline p(std::move(pts), false);
  const auto kv = curve::curvature_vectors(p);
  CHECK(std::abs(kv[300].norm() - kPi / 2.0) < 1e-2);
}

TEST_CASE("duplicate vertices are rejected") {
  CHECK_THROWS_AS(curve::curvature_vectors(
                      Polyline({{0, 0}, {0, 0}, {1, 1}}, false)),
                  std::invalid_argument);
}

TEST_CASE("pinned straight segment does not move") {
  std::vector<Vec2> pts;
  for (int i = 0; i <= 20; ++i) pts.push_back({0.05 * i, 0.0});
  const Polyline seg(std::move(pts), false);
  curve::CurveFlowOptions opts;
  const Polyline moved = curve::csf_step(seg, 1e-4, opts);
  for (int i = 0; i < seg.size(); ++i) {
    CHECK(moved.pts[i].x == Approx(seg.pts[i].x).margin(1e-14));
    CHECK(moved.pts[i].y == Approx(seg.pts[i].y).margin(1e-14));
  }
}

TEST_CASE("circle shrinks to the oracle radius") {
  const Polyline circle = *exact::shrinking_circle({0, 0}, 1.0, 0.0, 512);
  curve::CurveFlowOptions opts;
  const CurveTrajectory traj = curve::flow_curve(circle, 0.375, opts, {0.375});
  const Polyline& final = traj.states.back();
  double r_mean = 0.0;
  for (const auto& p : final.pts) r_mean += p.norm();
  r_mean /= final.size();
  CHECK(std::abs(r_mean - 0.5) / 0.5 < 1e-3);
}

TEST_CASE("angenent oval flows onto its own time translate") {
  const Polyline o1 = exact::angenent_oval_polyline(-1.0, 0.0, 1024);
  curve::CurveFlowOptions opts;
  const CurveTrajectory traj = curve::flow_curve(o1, 0.5, opts, {0.5});
  const Polyline o2 = exact::angenent_oval_polyline(-0.5, 0.0, 1024);
  CHECK(hausdorff_distance(traj.states.back(), o2) < 1e-2);
}

TEST_CASE("closed curve length strictly decreases under the flow") {
  const Polyline o1 = exact::angenent_oval_polyline(-1.0, 0.0, 512);
  curve::CurveFlowOptions opts;
  const CurveTrajectory traj = curve::flow_curve(o1, 0.3, opts, {0.0, 0.1, 0.2, 0.3});
  for (int k = 1; k < traj.size(); ++k)
    CHECK(traj.states[k].length() < traj.states[k - 1].length());
}

TEST_CASE("U-curve construction") {
  const Grid1D g(-1.0, 1.0, 2001);
  const ScalarField zero = ScalarField::zeros(g);
  const Polyline u_shape = curve::build_local_initial_curve(zero, 3.0);
  CHECK(u_shape.pts.front().x == Approx(-1.0));
  CHECK(u_shape.pts.front().y == Approx(3.0));
  CHECK(u_shape.pts.back().x == Approx(1.0));
  CHECK(u_shape.pts.back().y == Approx(3.0));

  const ScalarField parab = ScalarField::sampled(g, [](double x) { return 1.0 - x * x; });
  const Polyline p = curve::build_local_initial_curve(parab, 5.0);
  // endpoints of the graph sit at (±1, 0) with rays up to 5
  CHECK(p.pts.front().y == Approx(5.0));
  CHECK_THROWS_AS(curve::build_local_initial_curve(parab, 1.5), std::domain_error);

  // total length = 2 y_cap + graph arclength, against an independent quadrature
  const double arc = adaptive_simpson(
      [](double x) { return std::sqrt(1.0 + 4.0 * x * x); }, -1.0, 1.0, 1e-12);
  CHECK(p.length() == Approx(2.0 * (5.0 - 0.0) + arc).margin(2e-6));
}

TEST_CASE("graph extraction recovers graphs and rejects closed curves") {
  std::vector<Vec2> pts;
  for (int i = 0; i <= 400; ++i) {
    const double x = -1.0 + 2.0 * i / 400.0;
    pts.push_back({x, std::cos(x)});
  }
  const Polyline graph(std::move(pts), false);
  const Grid1D inner(-0.9, 0.9, 181);
  const auto ge = curve::graph_extract(graph, inner);
  REQUIRE(ge.ok);
  for (int j = 0; j < inner.n; ++j)
    CHECK(std::abs(ge.field.values[j] - std::cos(inner.node(j))) < 1e-4);

  const Polyline circle = *exact::shrinking_circle({0, 0}, 1.0, 0.0, 256);
  const auto bad = curve::graph_extract(circle, Grid1D(-0.5, 0.5, 11));
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.bad_nodes.empty());
}

TEST_CASE("local gcsf from zero data lifts off at the edges only") {
  const Grid1D g(-1.0, 1.0, 1025);
  curve::LocalGcsfOptions opts;
  opts.m = 1024;
  opts.snapshot_times = {0.005, 0.01};
  const Trajectory traj = curve::local_gcsf_solve(ScalarField::zeros(g), 0.01, opts);
  for (int k = 1; k < traj.size(); ++k) {
    // instant lift-off near the edges
    CHECK(traj.states[k].values.front() > 0.0);
    CHECK(traj.states[k].values.back() > 0.0);
    // the interior barely moves this early
    CHECK(std::abs(sample_linear(traj.states[k], 0.0)) <= 1e-3);
  }
  CHECK_THROWS_AS(
      curve::local_gcsf_solve(
          ScalarField::sampled(g, [](double x) { return -1.0 + x * x; }), 0.01, opts),
      std::invalid_argument);
}

TEST_CASE("local gcsf is dominated by the grim reaper envelope") {
  const Grid1D g(-1.0, 1.0, 1025);
  const ScalarField parab = ScalarField::sampled(g, [](double x) { return 1.0 - x * x; });
  curve::LocalGcsfOptions opts;
  opts.m = 1024;
  opts.snapshot_times = {0.02, 0.05, 0.1};
  const Trajectory traj = curve::local_gcsf_solve(parab, 0.1, opts);
  for (int k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k];
    const ScalarField& u = traj.states[k];
    for (int i = 0; i < u.size(); ++i)
      CHECK(u.values[i] <= exact::domination_envelope(u.grid.node(i), 1.0, t) + 1e-6);
  }
}

TEST_CASE("local gcsf preserves ordering of initial data") {
  const Grid1D g(-1.0, 1.0, 1025);
  const ScalarField small =
      ScalarField::sampled(g, [](double x) { return 0.3 * std::max(0.0, 1.0 - std::abs(x)); });
  const ScalarField big =
      ScalarField::sampled(g, [](double x) { return std::max(0.0, 1.0 - std::abs(x)); });
  curve::LocalGcsfOptions opts;
  opts.m = 1024;
  opts.eps_margin = 0.03;
  opts.inner_n = 257;
  opts.snapshot_times = {0.02, 0.05, 0.1};
  const Trajectory a = curve::local_gcsf_solve(small, 0.1, opts);
  const Trajectory b = curve::local_gcsf_solve(big, 0.1, opts);
  for (int k = 0; k < a.size(); ++k)
    for (int i = 0; i < a.grid().n; ++i)
      CHECK(a.states[k].values[i] <= b.states[k].values[i] + 2e-3);
}

TEST_CASE("intersection counting on canonical pairs") {
  // two parallel lines
  const Polyline l1({{-2, 0.0}, {0, 0.0}, {2, 0.0}}, false);
  const Polyline l2({{-2, 0.5}, {0, 0.5}, {2, 0.5}}, false);
  CHECK(curve::count_intersections(l2, l1, 0.05) == 0);

  // a line through a circle's centre
  const Polyline circle = *exact::shrinking_circle({0, 0}, 1.0, 0.0, 256);
  std::vector<Vec2> line_pts;
  for (int i = 0; i <= 200; ++i) line_pts.push_back({-2.0 + 4.0 * i / 200.0, 0.0});
  CHECK(curve::count_intersections(Polyline(std::move(line_pts), false), circle, 0.02) == 2);

  // sin graph against the axis on (-pi, pi): crossings at -pi+, 0, pi-
  std::vector<Vec2> sin_pts;
  for (int i = 0; i <= 400; ++i) {
    const double x = -3.5 + 7.0 * i / 400.0;
    sin_pts.push_back({x, std::sin(x)});
  }
  const Polyline axis({{-5, 0.0}, {0, 0.0}, {5, 0.0}}, false);
  CHECK(curve::count_intersections(Polyline(std::move(sin_pts), false), axis, 0.02) == 3);
}
