#include "csf/harnack.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace csf::harnack {

namespace {
constexpr double kPi = std::numbers::pi;

double default_tol(const Trajectory& traj) {
  const double t_end = traj.times.back();
  return 10.0 * (traj.meta.dx + traj.meta.dt_max) * (1.0 + t_end);
}
}  // namespace

ScalarField area_function(const ScalarField& u, double left_baseline) {
  std::vector<double> a = cumulative_integral(u);
  for (double& v : a) v += left_baseline;
  return ScalarField(u.grid, std::move(a));
}

ScalarField angle_function(const ScalarField& u) {
  std::vector<double> v = slopes(u);
  for (double& s : v) s = std::atan(s) + kPi / 2.0;
  return ScalarField(u.grid, std::move(v));
}

ScalarField harnack_quantity(const ScalarField& u, double t, double left_baseline) {
  if (t < 0.0) throw std::domain_error("harnack_quantity: t must be >= 0");
  ScalarField a = area_function(u, left_baseline);
  const ScalarField phi = angle_function(u);
  for (int i = 0; i < u.size(); ++i) a.values[i] -= 2.0 * t * phi.values[i];
  return a;
}

HarnackState harnack_state(const Trajectory& traj, int k) {
  HarnackState st;
  st.t = traj.times[k];
  const ScalarField& u = traj.states[k];
  st.area = area_function(u, traj.left_pad(k));
  st.angle = angle_function(u);
  st.quantity = st.area;
  for (int i = 0; i < u.size(); ++i) st.quantity.values[i] -= 2.0 * st.t * st.angle.values[i];
  st.pad_uncertainty = traj.meta.tail_bound.empty() ? 0.0 : traj.meta.tail_bound[k];
  return st;
}

EstimateReport check_harnack(const Trajectory& traj, double tol) {
  if (tol <= 0.0) tol = default_tol(traj);
  double margin = std::numeric_limits<double>::infinity();
  Witness w;
  for (int k = 0; k < traj.size(); ++k) {
    const HarnackState st = harnack_state(traj, k);
    const int n = st.quantity.size();
    for (int i = 0; i < n; ++i) {
      const double slack = st.quantity.values[i] + kPi * st.t;
      if (slack < margin) {
        margin = slack;
        w = {st.quantity.grid.node(i), st.t};
      }
    }
  }
  return EstimateReport::make("harnack-inequality", margin, tol, w);
}

EstimateReport check_gradient_bound(const Trajectory& traj, double tol) {
  if (tol <= 0.0) tol = default_tol(traj);
  double margin = std::numeric_limits<double>::infinity();
  Witness w;
  for (int k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k];
    if (t <= 0.0) continue;
    const ScalarField& u = traj.states[k];
    const ScalarField a = area_function(u, traj.left_pad(k));
    const std::vector<double> v = slopes(u);
    for (int i = 0; i < u.size(); ++i) {
      const double slack = a.values[i] / (2.0 * t) - std::atan(v[i]);
      if (slack < margin) {
        margin = slack;
        w = {u.grid.node(i), t};
      }
    }
  }
  return EstimateReport::make("gradient-bound", margin, tol, w);
}

BoundaryIdentityReport check_boundary_identities(const Trajectory& traj, double a_bar,
                                                 double check_time) {
  if (traj.size() < 3)
    throw std::domain_error("check_boundary_identities: need >= 3 snapshots");
  BoundaryIdentityReport out;
  const double eps = traj.meta.eps_margin;
  const double t_end = traj.times.back();

  auto total_area = [&](int k) {
    return traj.left_pad(k) + integral(traj.states[k]) + traj.right_pad(k);
  };
  if (a_bar < 0.0) a_bar = total_area(0);

  // (i) H(-1, t) = 0: both the area and t*phi vanish at the left edge.
  {
    double worst = 0.0;
    Witness w;
    double edge_scale = 0.0;
    for (int k = 0; k < traj.size(); ++k) {
      const double t = traj.times[k];
      if (t <= 0.0) continue;
      const ScalarField& u = traj.states[k];
      const double phi_left = angle_function(u).values.front();
      const double h_left = traj.left_pad(k) - 2.0 * t * phi_left;
      edge_scale = std::max(edge_scale, std::abs(u.values.front()));
      if (std::abs(h_left) > std::abs(worst)) {
        worst = h_left;
        w = {u.grid.left, t};
      }
    }
    const double tol = eps * (edge_scale + kPi * t_end) + 1e-6;
    out.left = EstimateReport::make("boundary-left-H-zero", tol - std::abs(worst), 0.0, w);
    out.left.tolerances["eps_scaled_tol"] = tol;
    out.left.note = "worst |H| at the inner left edge = " + std::to_string(std::abs(worst));
  }

  // (ii) H(1, t) = A_bar - pi t, evaluated in the eps->0 limit: the arms are
  // vertical so phi(1) = pi exactly, and the area is the measured total
  // (inner integral plus both sliver pads).
  {
    if (check_time < 0.0) check_time = 0.2;
    int k_best = -1;
    for (int k = 0; k < traj.size(); ++k) {
      if (traj.times[k] <= 0.0) continue;
      if (k_best < 0 ||
          std::abs(traj.times[k] - check_time) < std::abs(traj.times[k_best] - check_time))
        k_best = k;
    }
    const double t = traj.times[k_best];
    const double measured = total_area(k_best) - 2.0 * kPi * t;
    const double expected = a_bar - kPi * t;
    const double rel_tol = 0.02 * std::abs(expected);
    out.right = EstimateReport::make("boundary-right-H", rel_tol - std::abs(measured - expected),
                                     0.0, {traj.grid().right, t});
    out.right.tolerances["two_percent"] = rel_tol;
    out.right.tolerances["pad_uncertainty"] =
        traj.meta.tail_bound.empty() ? 0.0 : traj.meta.tail_bound[k_best];
    out.right.note = "measured " + std::to_string(measured) + " vs expected " +
                     std::to_string(expected);
  }

  // (iii) centered dA/dt matches phi nodewise.
  {
    double worst = 0.0;
    Witness w;
    double tol = 0.0;
    const Grid1D& g = traj.grid();
    for (int k = 1; k + 1 < traj.size(); ++k) {
      const double h1 = traj.times[k] - traj.times[k - 1];
      const double h2 = traj.times[k + 1] - traj.times[k];
      if (traj.times[k - 1] <= 0.0) continue;  // skip the kink at t = 0
      const ScalarField phi = angle_function(traj.states[k]);
      const auto a0 = area_function(traj.states[k - 1], traj.left_pad(k - 1));
      const auto a1 = area_function(traj.states[k], traj.left_pad(k));
      const auto a2 = area_function(traj.states[k + 1], traj.left_pad(k + 1));
      tol = std::max(tol, 5.0 * (std::max(h1, h2) + g.dx() * g.dx()));
      for (int i = 0; i < g.n; ++i) {
        const double da = -h2 / (h1 * (h1 + h2)) * a0.values[i] +
                          (h2 - h1) / (h1 * h2) * a1.values[i] +
                          h1 / (h2 * (h1 + h2)) * a2.values[i];
        const double miss = std::abs(da - phi.values[i]);
        if (miss > worst) {
          worst = miss;
          w = {g.node(i), traj.times[k]};
        }
      }
    }
    out.area_rate = EstimateReport::make("area-rate-equals-angle", tol - worst, 0.0, w);
    out.area_rate.tolerances["five_dt_dx2"] = tol;
    out.area_rate.note = "max |dA/dt - phi| = " + std::to_string(worst);
  }
  return out;
}

}  // namespace csf::harnack
