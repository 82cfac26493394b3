#pragma once

#include <optional>
#include <vector>

#include "csf/grid.hpp"
#include "csf/report.hpp"
#include "csf/trajectory.hpp"

// The explicit a priori bounds: magic-time delayed height estimate, its
// constants, the global height bound, the Lp-to-Linfty branch bounds, the
// truncation level, the test-function mass drift, and the Lp separation
// estimate, plus the spike-family sharpness experiment.

namespace csf::estimates {

struct DelayedBoundParams {
  double delta = 1.0;
  double a_bar = 0.0;  // L1 norm of u0 over (-1,1)
  double t = 0.0;
};

// t_star = a_bar / pi.
double magic_time(double a_bar);

struct DelayedConstant {
  double value;       // C(delta) = 0.5 tan(pi/(4(1+delta)) + pi/4)
  double over_bound;  // (1+delta)/delta
};
DelayedConstant delayed_constant(double delta);

// Height bound C(delta) + a_bar/2 + pi t/2, asserted for t >= (1+delta) t_star.
double delayed_height_bound(double delta, double a_bar, double t);

EstimateReport check_delayed_height(const Trajectory& traj, double delta, double a_bar,
                                    double tol = 0.0);

// sup u(t) <= sqrt(t) sqrt(2 a_bar/(t - t_star)) for positive mass a_bar on R.
EstimateReport check_global_height(const Trajectory& traj, double a_bar, double tol = 0.0);

struct LpHeightBound {
  double bound;
  const char* branch;  // "t>=a" or "t<a"
};

// Two-branch explicit bound from the Lp estimate with delta' = pi - 1; if the
// L1 norm is unknown both branches are evaluated and the larger kept.
LpHeightBound lp_height_bound(double p, double norm_p, double t,
                              std::optional<double> l1_norm = std::nullopt);

// k > 0 with ∫ (|u0| - k)^+ = t, by bisection. Requires 0 < t < ||u0||_1.
double truncation_level(const ScalarField& u0, double t);

// |∫ phi u(t) - ∫ phi u(s)| <= C(phi) (t-s), C(phi) = (pi/2) ∫ |phi'|.
double drift_constant(const ScalarField& phi);
EstimateReport check_mass_drift(const Trajectory& traj, const ScalarField& phi,
                                double tol = 0.0);

// Cutoff-weighted Lp separation:
// ||(u1-u2)(t) chi||_p <= ||(u1-u2)(s) chi||_p + 2 pi (1+delta) p (R-r)^{-(1-1/p)} (t-s)
// and, for p = 1, the clean global form with constant 2 pi.
EstimateReport check_lp_separation(const Trajectory& a, const Trajectory& b, double r,
                                   double R, double p, double delta, double tol = 0.0);
EstimateReport check_l1_separation_global(const Trajectory& a, const Trajectory& b,
                                          double tol = 0.0);

// Rate of the measured L1(J1) separation between two trajectories, fitted
// over snapshot pairs; the opposed Grim Reaper pair realises 2 pi.
double l1_separation_rate(const Trajectory& a, const Trajectory& b);

struct SpikeFamilySpec {
  std::vector<int> n_values;
  double amplitude = 1.0;          // mass of each profile
  std::vector<double> probe_times;
};

struct SharpnessRow {
  int n;
  double t;
  double height;     // |u(0,t)|
  double bound;      // delayed bound when t qualifies, else NaN
  bool bound_applies;
};

// Unit-mass mollifier spikes v_n(x) = n psi(n x); heights at the origin across
// probe times bracketing the magic time 1/pi.
std::vector<SharpnessRow> sharpness_table(const std::vector<int>& n_values,
                                          const std::vector<Trajectory>& flows,
                                          double delta, double mass);

// Smooth unit-mass mollifier profile scaled by n, sampled and renormalized so
// the grid mass is exactly `mass`.
ScalarField spike_profile(const Grid1D& g, int n, double mass = 1.0);
double mollifier(double x);  // c exp(-1/(1-x^2)) on (-1,1), unit mass

}  // namespace csf::estimates
