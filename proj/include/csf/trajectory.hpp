#pragma once

#include <string>
#include <vector>

#include "csf/geometry.hpp"
#include "csf/grid.hpp"

namespace csf {

// Solver provenance and per-snapshot side data. For graph trajectories
// extracted from a flowed U-curve, left_pad/right_pad hold the measured area
// under the curve over the slivers (-1,-1+eps) and (1-eps,1) that the inner
// grid does not cover, and tail_bound holds the envelope bound on whatever
// mass sits above the truncation cap.
struct TrajectoryMeta {
  std::string solver;
  std::string bc;
  double theta = 1.0;
  double dt_max = 0.0;
  double dx = 0.0;
  double y_cap = 0.0;
  double eps_margin = 0.0;
  double chord = 0.0;
  bool self_intersection = false;
  std::vector<double> left_pad;
  std::vector<double> right_pad;
  std::vector<double> tail_bound;
};

// Time-indexed snapshots of a graphing function on one shared grid.
struct Trajectory {
  std::vector<double> times;
  std::vector<ScalarField> states;
  TrajectoryMeta meta;

  int size() const { return static_cast<int>(times.size()); }
  const Grid1D& grid() const { return states.front().grid; }
  double left_pad(int k) const {
    return meta.left_pad.empty() ? 0.0 : meta.left_pad[k];
  }
  double right_pad(int k) const {
    return meta.right_pad.empty() ? 0.0 : meta.right_pad[k];
  }
};

// Same, for full-curve flows.
struct CurveTrajectory {
  std::vector<double> times;
  std::vector<Polyline> states;
  TrajectoryMeta meta;

  int size() const { return static_cast<int>(times.size()); }
};

}  // namespace csf
