#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <numbers>

#include "csf/estimates.hpp"
#include "csf/exact.hpp"
#include "csf/graphical.hpp"

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

TEST_CASE("magic time") {
  CHECK(estimates::magic_time(0.0) == 0.0);
  CHECK(estimates::magic_time(1.0) == Approx(1.0 / kPi));
  CHECK(estimates::magic_time(kPi) == Approx(1.0));
  CHECK_THROWS_AS(estimates::magic_time(-1.0), std::domain_error);
}

TEST_CASE("delayed constant values and bounds") {
  const auto c1 = estimates::delayed_constant(1.0);
  CHECK(c1.value == Approx((1.0 + std::sqrt(2.0)) / 2.0).epsilon(1e-14));
  CHECK(c1.over_bound == Approx(2.0));
  CHECK(c1.value <= c1.over_bound);

  // limit delta -> infinity: C -> tan(pi/4)/2 = 1/2
  CHECK(estimates::delayed_constant(1e9).value == Approx(0.5).margin(1e-6));

  for (double d : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    const auto c = estimates::delayed_constant(d);
    CHECK(c.value <= c.over_bound);
    // tan and cot forms agree: pi/(4(1+d)) + pi/4 = pi/2 - pi d/(4(1+d))
    const double cot_form = 0.5 / std::tan(kPi * d / (4.0 * (1.0 + d)));
    CHECK(c.value == Approx(cot_form).epsilon(1e-13));
  }

  // time form: C(delta_t) <= t/(t - t_star)
  const double t_star = 0.3;
  for (double t : {0.35, 0.5, 1.0, 4.0}) {
    const double delta_t = (t - t_star) / t_star;
    CHECK(estimates::delayed_constant(delta_t).value <= t / (t - t_star) + 1e-12);
  }
}

TEST_CASE("delayed height bound arithmetic") {
  // spike bound at delta = 1, unit mass, t = 2/pi: C(1) + 1/2 + 1
  CHECK(estimates::delayed_height_bound(1.0, 1.0, 2.0 / kPi) ==
        Approx(1.2071067811865475 + 0.5 + 1.0).epsilon(1e-13));
}

TEST_CASE("delayed height check is inconclusive without qualifying times") {
  const Grid1D g(-2.0, 2.0, 201);
  Trajectory traj;
  traj.times = {0.0, 0.05};
  traj.states = {ScalarField::zeros(g), ScalarField::zeros(g)};
  traj.meta.dx = g.dx();
  traj.meta.dt_max = 0.01;
  const auto rep = estimates::check_delayed_height(traj, 1.0, 1.0);
  CHECK(rep.status == "inconclusive");

  // zero data passes trivially at all times (t_star = 0)
  const auto ok = estimates::check_delayed_height(traj, 1.0, 0.0);
  CHECK(ok.passed);
}

TEST_CASE("lp height bound branches") {
  // large-time branch: C(pi-1) + a/2 + pi t/2 at a = 1, t = 2
  const double c = estimates::delayed_constant(kPi - 1.0).value;
  const auto big = estimates::lp_height_bound(2.0, 1.0, 2.0, 1.0);
  CHECK(std::string(big.branch) == "t>=a");
  CHECK(big.bound == Approx(c + 0.5 + kPi).epsilon(1e-13));

  // p = 2, norm 1, t = 1: k = 1 exactly on the small branch
  const auto small = estimates::lp_height_bound(2.0, 1.0, 1.0, 3.0);
  CHECK(std::string(small.branch) == "t<a");
  CHECK(small.bound == Approx(1.0 + c + 0.5 + kPi / 2.0).epsilon(1e-13));

  // k is decreasing in t at fixed norm
  const auto k_of = [&](double t) {
    return estimates::lp_height_bound(2.0, 1.0, t, 100.0).bound - (c + 0.5 * t + kPi * t / 2.0);
  };
  CHECK(k_of(2.0) < k_of(1.0));
  CHECK_THROWS_AS(estimates::lp_height_bound(1.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("truncation level: flat and hat profiles") {
  const Grid1D g(-1.0, 1.0, 801);
  const ScalarField flat = ScalarField::sampled(g, [](double) { return 1.0; });
  CHECK(estimates::truncation_level(flat, 1.0) == Approx(0.5).margin(1e-9));

  const ScalarField hat =
      ScalarField::sampled(g, [](double x) { return std::max(0.0, 1.0 - std::abs(x)); });
  CHECK(estimates::truncation_level(hat, 0.25) == Approx(0.5).margin(1e-8));

  CHECK_THROWS_AS(estimates::truncation_level(hat, 2.0), std::domain_error);

  // k <= ||u0||_p^{p/(p-1)} / t^{1/(p-1)} for p = 2 across profiles and times
  for (double t : {0.1, 0.25, 0.5, 0.9}) {
    const double k = estimates::truncation_level(hat, t);
    const double norm2 = lp_norm(hat, 2.0, {-1.0, 1.0});
    CHECK(k <= norm2 * norm2 / t + 1e-12);
  }
}

TEST_CASE("drift constant of a hat is pi") {
  const Grid1D g(-0.5, 0.5, 513);
  const ScalarField hat =
      ScalarField::sampled(g, [](double x) { return std::max(0.0, 1.0 - std::abs(2.0 * x)); });
  CHECK(estimates::drift_constant(hat) == Approx(kPi).epsilon(1e-2));
}

TEST_CASE("mass drift check: static solution and spike flow") {
  const Grid1D g(-4.0, 4.0, 2001);
  Trajectory line;
  for (double t : {0.0, 0.1, 0.2}) {
    line.times.push_back(t);
    line.states.push_back(ScalarField::sampled(g, [](double x) { return 0.2 * x + 1.0; }));
  }
  line.meta.dx = g.dx();
  line.meta.dt_max = 0.01;
  const ScalarField phi = ScalarField::sampled(
      Grid1D(-1.0, 1.0, 401), [](double x) { return std::max(0.0, 1.0 - std::abs(x)); });
  CHECK(estimates::check_mass_drift(line, phi).passed);

  graphical::SolverOptions opts;
  opts.snapshot_times = {0.05, 0.1, 0.2, 0.4};
  const Trajectory spike =
      graphical::solve(estimates::spike_profile(g, 16, 1.0), 0.4, opts);
  CHECK(estimates::check_mass_drift(spike, phi).passed);
}

TEST_CASE("identical trajectories separate trivially") {
  const Grid1D g(-2.0, 2.0, 401);
  graphical::SolverOptions opts;
  opts.snapshot_times = {0.05, 0.1};
  const Trajectory a = graphical::solve(estimates::spike_profile(g, 4, 1.0), 0.1, opts);
  CHECK(estimates::check_lp_separation(a, a, 0.5, 1.5, 2.0, 1.0).passed);
  CHECK(estimates::check_l1_separation_global(a, a).passed);
}

TEST_CASE("spike profiles have unit mass and the right height scaling") {
  const Grid1D g(-6.0, 6.0, 24001);
  for (int n : {4, 16, 64}) {
    const ScalarField v = estimates::spike_profile(g, n, 1.0);
    CHECK(l1_norm(v) == Approx(1.0).margin(1e-12));
    // height at the origin is n * max(psi), up to sampling normalization
    CHECK(sample_linear(v, 0.0) ==
          Approx(n * estimates::mollifier(0.0)).epsilon(2e-2));
  }
}

TEST_CASE("lp norm of a grim reaper profile against adaptive quadrature") {
  const Grid1D g(-0.9, 0.9, 801);
  const ScalarField gr =
      ScalarField::sampled(g, [](double x) { return exact::grim_reaper(x, 0.5, 0.0); });
  const double lib = lp_norm(gr, 3.0, {-0.9, 0.9});
  const double cube = adaptive_simpson(
      [](double x) {
        const double v = exact::grim_reaper(x, 0.5, 0.0);
        return std::abs(v * v * v);
      },
      -0.9, 0.9, 1e-13);
  CHECK(lib == Approx(std::cbrt(cube)).epsilon(1e-4));
}
