#pragma once

#include <optional>
#include <string>
#include <vector>

#include "csf/geometry.hpp"
#include "csf/grid.hpp"
#include "csf/trajectory.hpp"

// Polyline curve shortening flow: forward Euler on the discrete curvature
// vector with periodic uniform-arclength redistribution. Also the U-shaped
// realisation of the local graphical flow (graph over (-1,1) joined to
// vertical rays), graph extraction, and intersection/avoidance counting.

namespace csf::curve {

struct CurveFlowOptions {
  double dt_safety = 0.2;  // must be <= 0.5
  int redistribute_every = 5;
  double y_cap = 0.0;      // truncation height for vertical ends (0 = unset)
  bool pin_ends = true;
};

// Discrete curvature vector at each vertex: second difference of position
// with respect to arclength, 2*(t_plus - t_minus)/(l_plus + l_minus) with
// unit tangents t and chord lengths l. Endpoints of open curves get zero.
// Throws on duplicate vertices.
std::vector<Vec2> curvature_vectors(const Polyline& p);

double max_curvature(const Polyline& p);

// One explicit step; dt is the caller's responsibility (see stable_dt).
Polyline csf_step(const Polyline& p, double dt, const CurveFlowOptions& opts);

double stable_dt(const Polyline& p, double dt_safety);

// Resample to m vertices at uniform arclength with a cubic through the
// existing vertices (Catmull-Rom in chord-length parameter).
Polyline redistribute_uniform(const Polyline& p, int m);

// Flow a curve to t_end with snapshots; redistribution every
// redistribute_every steps; ends pinned if requested.
CurveTrajectory flow_curve(const Polyline& p0, double t_end, const CurveFlowOptions& opts,
                           const std::vector<double>& snapshot_times);

// Lipschitz U-curve: graph of u0 over (-1,1) joined to the vertical segments
// {±1} x [u0(±1), y_cap]. Throws if y_cap < max u0 + 1.
Polyline build_local_initial_curve(const ScalarField& u0, double y_cap, int m = 0);

struct GraphExtract {
  bool ok = false;
  ScalarField field;
  std::vector<int> bad_nodes;
  std::string message;
};

// Height of the unique crossing of each vertical grid line below y_max.
GraphExtract graph_extract(const Polyline& p, const Grid1D& grid,
                           double y_max = std::numeric_limits<double>::infinity());

struct LocalGcsfOptions {
  int m = 2048;                  // flowed vertex count
  double dt_safety = 0.2;
  int redistribute_every = 5;
  double y_cap = 0.0;            // 0 -> max u0 + pi t_end/2 + 4
  double eps_margin = 0.0;       // 0 -> smallest multiple of the chord that extracts
  int inner_n = 0;               // 0 -> spacing ~ chord length
  std::vector<double> snapshot_times;
};

// Flow the U-curve for u0 >= 0 and return graph snapshots on an inner grid
// (-1+eps, 1-eps), with the sliver areas measured from the polyline recorded
// in the trajectory metadata.
Trajectory local_gcsf_solve(const ScalarField& u0, double t_end, const LocalGcsfOptions& opts);

// Transversal crossing count via the signed-offset sequence of p1's vertices
// against p2, with |offset| < tol plateaus compressed so that tangential
// near-touches are not double counted. tol = 0 picks 2*max chord length.
int count_intersections(const Polyline& p1, const Polyline& p2, double tol = 0.0);

}  // namespace csf::curve
