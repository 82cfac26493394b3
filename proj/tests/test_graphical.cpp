#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "csf/estimates.hpp"
#include "csf/exact.hpp"
#include "csf/graphical.hpp"

using namespace csf;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
const auto gr_oracle = [](double x, double t) { return exact::grim_reaper(x, t, 0.0); };
}  // namespace

TEST_CASE("constant and linear profiles are steady states") {
  const Grid1D g(-1.0, 1.0, 101);
  const ScalarField zero = ScalarField::zeros(g);
  const ScalarField z1 = graphical::step(zero, 1e-3, graphical::BoundaryCondition::zero());
  for (double v : z1.values) CHECK(v == 0.0);

  const ScalarField c = ScalarField::sampled(g, [](double) { return 2.5; });
  const ScalarField c1 = graphical::step(c, 1e-3, graphical::BoundaryCondition::fixed());
  for (double v : c1.values) CHECK(v == Approx(2.5).margin(1e-13));

  const ScalarField lin = ScalarField::sampled(g, [](double x) { return 0.7 * x - 0.2; });
  const ScalarField l1 = graphical::step(lin, 1e-3, graphical::BoundaryCondition::fixed());
  for (int i = 0; i < g.n; ++i) CHECK(l1.values[i] == Approx(lin.values[i]).margin(1e-12));
}

TEST_CASE("one step from grim reaper data tracks the closed form") {
  const Grid1D g(-0.9, 0.9, 801);
  const ScalarField u0 = ScalarField::sampled(g, [](double x) { return gr_oracle(x, 0.1); });
  const ScalarField u1 =
      graphical::step(u0, 1e-4, graphical::BoundaryCondition::with_oracle(gr_oracle), 1.0, 0.1);
  double err = 0.0;
  for (int i = 0; i < g.n; ++i)
    err = std::max(err, std::abs(u1.values[i] - gr_oracle(g.node(i), 0.1001)));
  CHECK(err < 1e-6);
}

TEST_CASE("grim reaper solve converges at second order in space") {
  double prev_err = 0.0;
  double order = 0.0;
  for (int n : {101, 201, 401}) {
    const Grid1D g(-0.9, 0.9, n);
    graphical::SolverOptions opts;
    opts.bc = graphical::BoundaryCondition::with_oracle(gr_oracle);
    opts.dt_max = g.dx() * g.dx();
    opts.snapshot_times = {0.5};
    const ScalarField u0 = ScalarField::sampled(g, [](double x) { return gr_oracle(x, 0.0); });
    const Trajectory traj = graphical::solve(u0, 0.5, opts);
    double err = 0.0;
    const ScalarField& u = traj.states.back();
    for (int i = 0; i < g.n; ++i)
      err = std::max(err, std::abs(u.values[i] - gr_oracle(g.node(i), 0.5)));
    if (prev_err > 0.0) order = std::log2(prev_err / err);
    prev_err = err;
  }
  CHECK(order >= 1.8);
}

TEST_CASE("zero data stays zero; compact data decays like heat") {
  const Grid1D g(-8.0, 8.0, 1601);
  graphical::SolverOptions opts;
  opts.snapshot_times = {0.25, 0.5, 1.0, 2.0};
  const Trajectory zero = graphical::solve(ScalarField::zeros(g), 2.0, opts);
  for (const auto& s : zero.states)
    for (double v : s.values) CHECK(v == 0.0);

  const ScalarField hat =
      ScalarField::sampled(g, [](double x) { return std::max(0.0, 1.0 - std::abs(x)); });
  const Trajectory traj = graphical::solve(hat, 2.0, opts);
  double prev_mass = std::numeric_limits<double>::infinity();
  for (int k = 0; k < traj.size(); ++k) {
    const double mass = l1_norm(traj.states[k]);
    CHECK(mass <= prev_mass + 1e-12);
    prev_mass = mass;
  }
  double prev_height = std::numeric_limits<double>::infinity();
  for (int k = 0; k < traj.size(); ++k) {
    if (traj.times[k] < 0.5) continue;
    const double h = std::abs(sample_linear(traj.states[k], 0.0));
    CHECK(h < prev_height);
    prev_height = h;
  }
}

TEST_CASE("rescale with rho = 1 is the identity") {
  const Grid1D g(-2.0, 2.0, 201);
  graphical::SolverOptions opts;
  opts.snapshot_times = {0.1};
  const ScalarField u0 = ScalarField::sampled(g, [](double x) { return std::exp(-4 * x * x); });
  const Trajectory traj = graphical::solve(u0, 0.1, opts);
  const Trajectory same = graphical::rescale(traj, 1.0);
  CHECK(same.times == traj.times);
  for (int k = 0; k < traj.size(); ++k)
    for (int i = 0; i < g.n; ++i)
      CHECK(same.states[k].values[i] == traj.states[k].values[i]);
}

TEST_CASE("rescaled mass identity on a hat profile") {
  // ||u0^rho||_L1(J1) = rho^-2 ||u0||_L1(J_rho) with rho = 1/2
  const double rho = 0.5;
  const Grid1D g(-1.0, 1.0, 1601);
  const ScalarField u0 =
      ScalarField::sampled(g, [](double x) { return std::max(0.0, 1.0 - std::abs(x)); });
  Trajectory traj;
  traj.times = {0.0};
  traj.states = {u0};
  const Trajectory scaled = graphical::rescale(traj, rho);
  const double lhs = l1_norm(scaled.states[0], {-1.0, 1.0});
  const double rhs = l1_norm(u0, {-rho, rho}) / (rho * rho);
  CHECK(lhs == Approx(rhs).epsilon(1e-10));
}

TEST_CASE("solve and rescale commute on a smooth bump") {
  const double rho = 0.5;
  const Grid1D g(-2.0, 2.0, 801);
  const ScalarField u0 =
      ScalarField::sampled(g, [](double x) { return estimates::mollifier(2.0 * x); });

  graphical::SolverOptions opts;
  opts.snapshot_times = {0.04};
  opts.dt_max = g.dx() * g.dx();
  const Trajectory solved = graphical::solve(u0, 0.04, opts);
  const Trajectory path_a = graphical::rescale(solved, rho);  // t = 0.04 -> 0.16

  Trajectory init;
  init.times = {0.0};
  init.states = {u0};
  const ScalarField u0_scaled = graphical::rescale(init, rho).states[0];
  graphical::SolverOptions opts2;
  opts2.snapshot_times = {0.16};
  opts2.dt_max = u0_scaled.grid.dx() * u0_scaled.grid.dx();
  const Trajectory path_b = graphical::solve(u0_scaled, 0.16, opts2);

  double gap = 0.0;
  const ScalarField& a = path_a.states.back();
  const ScalarField& b = path_b.states.back();
  for (int i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a.values[i] - b.values[i]));
  const double dx = g.dx();
  CHECK(gap <= 5.0 * dx * dx * 10.0);  // commuting-diagram test at dx^2 level
}

TEST_CASE("pde residual: static line is exact, grim reaper is truncation-limited") {
  const Grid1D g(-0.9, 0.9, 801);
  Trajectory line;
  for (double t : {0.0, 0.1, 0.2}) {
    line.times.push_back(t);
    line.states.push_back(ScalarField::sampled(g, [](double x) { return 2.0 * x + 1.0; }));
  }
  // rounding noise in the second difference is amplified by 1/dx^2
  CHECK(graphical::pde_residual(line) == Approx(0.0).margin(1e-9));

  Trajectory gr;
  for (double t : {0.099, 0.1, 0.101}) {
    gr.times.push_back(t);
    gr.states.push_back(ScalarField::sampled(g, [t](double x) { return gr_oracle(x, t); }));
  }
  CHECK(graphical::pde_residual(gr) < 1e-3);

  Trajectory two;
  two.times = {0.0, 0.1};
  two.states = {line.states[0], line.states[1]};
  CHECK_THROWS_AS(graphical::pde_residual(two), std::domain_error);
}

TEST_CASE("solver output residual is comparable to the exact-solution residual") {
  const Grid1D g(-2.0, 2.0, 801);
  const ScalarField u0 =
      ScalarField::sampled(g, [](double x) { return estimates::mollifier(x); });
  graphical::SolverOptions opts;
  const double dt = 1e-3;
  opts.dt_max = dt;
  for (int k = 0; k <= 4; ++k) opts.snapshot_times.push_back(0.1 + k * dt);
  const Trajectory num = graphical::solve(u0, opts.snapshot_times.back(), opts);

  // reference: residual of the closed-form grim reaper at matching resolution
  Trajectory gr;
  for (int k = 0; k <= 4; ++k) {
    const double t = 0.1 + k * dt;
    gr.times.push_back(t);
    gr.states.push_back(
        ScalarField::sampled(Grid1D(-0.9, 0.9, 801), [t](double x) { return gr_oracle(x, t); }));
  }
  const double res_num = graphical::pde_residual(num);
  const double res_exact = graphical::pde_residual(gr);
  CHECK(res_num <= 10.0 * res_exact);
}

TEST_CASE("discrete comparison principle for ordered data") {
  const Grid1D g(-2.0, 2.0, 401);
  const ScalarField lo =
      ScalarField::sampled(g, [](double x) { return estimates::mollifier(x); });
  const ScalarField hi =
      ScalarField::sampled(g, [](double x) { return estimates::mollifier(x / 1.5) + 0.2; });
  graphical::SolverOptions opts;
  opts.bc = graphical::BoundaryCondition::fixed();
  opts.snapshot_times = {0.05, 0.1, 0.2};
  const Trajectory a = graphical::solve(lo, 0.2, opts);
  const Trajectory b = graphical::solve(hi, 0.2, opts);
  for (int k = 0; k < a.size(); ++k)
    for (int i = 0; i < g.n; ++i)
      CHECK(a.states[k].values[i] <= b.states[k].values[i] + 1e-12);
}

TEST_CASE("snapshot times must lie inside the horizon") {
  const Grid1D g(-1.0, 1.0, 51);
  graphical::SolverOptions opts;
  opts.snapshot_times = {2.0};
  CHECK_THROWS_AS(graphical::solve(ScalarField::zeros(g), 1.0, opts), std::invalid_argument);
}
