#pragma once

#include "csf/grid.hpp"
#include "csf/report.hpp"
#include "csf/trajectory.hpp"

// Area function A(y,t) = ∫_{-1}^{y} u, tangent angle phi = arctan(u_x) + pi/2,
// and the Harnack quantity H = A - 2t*phi of a local graphical flow, together
// with the inequality H >= -pi t and the boundary/initial identities.

namespace csf::harnack {

struct HarnackState {
  double t = 0.0;
  ScalarField area;
  ScalarField angle;
  ScalarField quantity;
  double pad_uncertainty = 0.0;  // envelope bound on area missing left of the grid
};

// Cumulative trapezoid from the grid's left edge plus a baseline for the
// sliver between -1 and the inner grid (measured pad area when available).
ScalarField area_function(const ScalarField& u, double left_baseline = 0.0);
ScalarField angle_function(const ScalarField& u);
ScalarField harnack_quantity(const ScalarField& u, double t, double left_baseline = 0.0);

HarnackState harnack_state(const Trajectory& traj, int k);

// min over snapshots/nodes of (H + pi t); passes if >= -tol.
EstimateReport check_harnack(const Trajectory& traj, double tol = 0.0);

// Gradient-bound corollary: arctan(u_x) <= A/(2t) at every node, t > 0.
EstimateReport check_gradient_bound(const Trajectory& traj, double tol = 0.0);

struct BoundaryIdentityReport {
  EstimateReport left;       // H -> 0 at the left edge
  EstimateReport right;      // H(1,t) = A_bar - pi t, evaluated in the eps->0 limit
  EstimateReport area_rate;  // centered dA/dt matches phi nodewise
  bool all_passed() const { return left.passed && right.passed && area_rate.passed; }
};

// a_bar < 0 means "read it off the first snapshot".
BoundaryIdentityReport check_boundary_identities(const Trajectory& traj, double a_bar = -1.0,
                                                 double check_time = -1.0);

}  // namespace csf::harnack
