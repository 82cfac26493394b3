#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "csf/grid.hpp"
#include "csf/trajectory.hpp"

// Time stepping for the graphical flow du/dt = d/dx(arctan(du/dx)) on an
// interval, linearized theta-scheme with the mobility a(v) = 1/(1+v^2) frozen
// at the old time level and evaluated at cell faces. One tridiagonal solve
// per step.

namespace csf::graphical {

enum class BcKind { DirichletFixed, DirichletOracle, Zero };

struct BoundaryCondition {
  BcKind kind = BcKind::Zero;
  std::function<double(double x, double t)> oracle;  // used by DirichletOracle

  static BoundaryCondition zero() { return {BcKind::Zero, {}}; }
  static BoundaryCondition fixed() { return {BcKind::DirichletFixed, {}}; }
  static BoundaryCondition with_oracle(std::function<double(double, double)> f) {
    return {BcKind::DirichletOracle, std::move(f)};
  }
  const char* name() const;
};

struct SolverOptions {
  double dt_max = 0.0;  // 0 -> use dx
  double theta = 1.0;   // implicitness weight in [1/2, 1]
  BoundaryCondition bc = BoundaryCondition::zero();
  std::vector<double> snapshot_times;
  int ramp_steps = 50;  // dt grows geometrically from dx^2 to the cruise step

  // Explicit-part monotonicity cap for comparison experiments.
  static double monotone_dt_cap(double theta, double dx) {
    if (theta >= 1.0) return std::numeric_limits<double>::infinity();
    return dx * dx / (2.0 * (1.0 - theta));
  }
};

// One linearized step from time t_old to t_old + dt.
ScalarField step(const ScalarField& u, double dt, const BoundaryCondition& bc,
                 double theta = 1.0, double t_old = 0.0);

// March to t_end, recording the requested snapshot times (always including
// t=0 and t_end). Throws SolverDivergence if non-finite values appear.
Trajectory solve(const ScalarField& u0, double t_end, const SolverOptions& opts);

struct SolverDivergence : std::runtime_error {
  double time;
  explicit SolverDivergence(double t);
};

// Parabolic rescaling u -> u^rho(x,t) = rho^{-1} u(rho x, rho^2 t). The output
// grid is the input grid stretched by 1/rho, so no resampling error enters.
Trajectory rescale(const Trajectory& traj, double rho);

// Max over interior nodes/times of |D_t u - D_xx u / (1 + (D_x u)^2)| with
// centered differences in both variables. Needs >= 3 snapshots.
double pde_residual(const Trajectory& traj);

}  // namespace csf::graphical
