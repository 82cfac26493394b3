#include "csf/estimates.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>

#include "csf/parallel.hpp"

namespace csf::estimates {

namespace {
constexpr double kPi = std::numbers::pi;

double default_tol(const Trajectory& traj) {
  double sup = 0.0;
  for (const auto& s : traj.states) sup = std::max(sup, s.max_abs());
  return std::max(1e-6, 10.0 * (traj.meta.dx + traj.meta.dt_max) * (1.0 + sup));
}
}  // namespace

double magic_time(double a_bar) {
  if (a_bar < 0.0) throw std::domain_error("magic_time: mass must be >= 0");
  return a_bar / kPi;
}

DelayedConstant delayed_constant(double delta) {
  if (delta <= 0.0) throw std::domain_error("delayed_constant: delta must be > 0");
  DelayedConstant c;
  c.value = 0.5 * std::tan(kPi / (4.0 * (1.0 + delta)) + kPi / 4.0);
  c.over_bound = (1.0 + delta) / delta;
  assert(c.value <= c.over_bound + 1e-12);
  return c;
}

double delayed_height_bound(double delta, double a_bar, double t) {
  return delayed_constant(delta).value + 0.5 * a_bar + kPi * t / 2.0;
}

EstimateReport check_delayed_height(const Trajectory& traj, double delta, double a_bar,
                                    double tol) {
  if (tol <= 0.0) tol = default_tol(traj);
  const double t_min = (1.0 + delta) * magic_time(a_bar);
  double margin = std::numeric_limits<double>::infinity();
  Witness w;
  bool any = false;
  for (int k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k];
    if (t < t_min - 1e-12) continue;
    any = true;
    const double h = std::abs(sample_linear(traj.states[k], 0.0));
    const double slack = delayed_height_bound(delta, a_bar, t) - h;
    if (slack < margin) {
      margin = slack;
      w = {0.0, t};
    }
  }
  if (!any)
    return EstimateReport::inconclusive("delayed-height",
                                        "no snapshot at or after (1+delta) t_star");
  auto r = EstimateReport::make("delayed-height", margin, tol, w);
  r.tolerances["t_star"] = magic_time(a_bar);
  return r;
}

EstimateReport check_global_height(const Trajectory& traj, double a_bar, double tol) {
  if (tol <= 0.0) tol = default_tol(traj);
  const double t_star = magic_time(a_bar);
  double margin = std::numeric_limits<double>::infinity();
  Witness w;
  bool any = false;
  for (int k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k];
    if (t <= t_star) continue;
    any = true;
    const double bound = std::sqrt(t) * std::sqrt(2.0 * a_bar / (t - t_star));
    const ScalarField& u = traj.states[k];
    for (int i = 0; i < u.size(); ++i) {
      const double slack = bound - u.values[i];
      if (slack < margin) {
        margin = slack;
        w = {u.grid.node(i), t};
      }
    }
  }
  if (!any)
    return EstimateReport::inconclusive("global-height", "no snapshot after t_star");
  return EstimateReport::make("global-height", margin, tol, w);
}

LpHeightBound lp_height_bound(double p, double norm_p, double t,
                              std::optional<double> l1_norm) {
  if (p <= 1.0) throw std::domain_error("lp_height_bound: p must be > 1");
  if (t <= 0.0) throw std::domain_error("lp_height_bound: t must be > 0");
  const double c = delayed_constant(kPi - 1.0).value;
  const double k = std::pow(norm_p, p / (p - 1.0)) / std::pow(t, 1.0 / (p - 1.0));
  const double small_branch = k + c + 0.5 * t + kPi * t / 2.0;
  if (l1_norm) {
    const double a = *l1_norm;
    if (t >= a) return {c + 0.5 * a + kPi * t / 2.0, "t>=a"};
    return {small_branch, "t<a"};
  }
  // Without the L1 norm the branch predicate cannot be evaluated; keep the
  // larger of the two bounds.
  const double large_branch = c + 0.5 * t + kPi * t / 2.0;  // a <= t on that branch
  return small_branch >= large_branch ? LpHeightBound{small_branch, "t<a"}
                                      : LpHeightBound{large_branch, "t>=a"};
}

double truncation_level(const ScalarField& u0, double t) {
  const Interval span{u0.grid.left, u0.grid.right};
  auto excess = [&](double k) {
    ScalarField f = u0;
    for (double& v : f.values) v = std::max(std::abs(v) - k, 0.0);
    return integral(f, span);
  };
  const double total = l1_norm(u0, span);
  if (t <= 0.0 || t >= total)
    throw std::domain_error("truncation_level: need 0 < t < ||u0||_1");
  double lo = 0.0, hi = u0.max_abs();
  // excess is continuous and strictly decreasing to 0 on [0, max|u0|]
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double e = excess(mid);
    if (std::abs(e - t) <= 1e-10) return mid;
    (e > t ? lo : hi) = mid;
    if (hi - lo < 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

double drift_constant(const ScalarField& phi) {
  const std::vector<double> v = slopes(phi);
  ScalarField d(phi.grid, v);
  return (kPi / 2.0) * l1_norm(d);
}

EstimateReport check_mass_drift(const Trajectory& traj, const ScalarField& phi, double tol) {
  if (tol <= 0.0) tol = default_tol(traj);
  const Grid1D& g = traj.grid();
  if (phi.grid.left < g.left - 1e-12 || phi.grid.right > g.right + 1e-12)
    throw std::domain_error("check_mass_drift: phi support must lie inside the grid");
  const double c_phi = drift_constant(phi);

  std::vector<double> moments(traj.size());
  for (int k = 0; k < traj.size(); ++k)
    moments[k] = weighted_integral(traj.states[k],
                                   [&](double x) { return phi.grid.contains(x)
                                                              ? sample_linear(phi, x)
                                                              : 0.0; });
  double margin = std::numeric_limits<double>::infinity();
  Witness w;
  for (int k = 0; k < traj.size(); ++k)
    for (int j = k + 1; j < traj.size(); ++j) {
      const double slack =
          c_phi * (traj.times[j] - traj.times[k]) - std::abs(moments[j] - moments[k]);
      if (slack < margin) {
        margin = slack;
        w = {0.0, traj.times[j]};
      }
    }
  auto r = EstimateReport::make("mass-drift", margin, tol, w);
  r.tolerances["c_phi"] = c_phi;
  return r;
}

namespace {

// chi = 1 on J_r, 0 outside J_R, linear in between; the slope 1/(R-r) sits
// below the (1+delta)/(R-r) budget the estimate's cutoff is allowed.
double cutoff(double x, double r, double R) {
  const double ax = std::abs(x);
  if (ax <= r) return 1.0;
  if (ax >= R) return 0.0;
  return (R - ax) / (R - r);
}

}  // namespace

EstimateReport check_lp_separation(const Trajectory& a, const Trajectory& b, double r, double R,
                                   double p, double delta, double tol) {
  if (!(0.0 < r && r < R)) throw std::domain_error("check_lp_separation: need 0 < r < R");
  if (!(a.grid() == b.grid()) || a.times != b.times)
    throw std::domain_error("check_lp_separation: trajectories must share grid and times");
  if (tol <= 0.0) tol = std::max(default_tol(a), default_tol(b));
  const Grid1D& g = a.grid();
  if (R > std::min(-g.left, g.right) + 1e-12)
    throw std::domain_error("check_lp_separation: J_R must lie inside the grid");

  const double rate = 2.0 * kPi * (1.0 + delta) * p / std::pow(R - r, 1.0 - 1.0 / p);
  std::vector<double> norms(a.size());
  for (int k = 0; k < a.size(); ++k) {
    ScalarField diff = a.states[k];
    for (int i = 0; i < diff.size(); ++i)
      diff.values[i] = (diff.values[i] - b.states[k].values[i]) * cutoff(g.node(i), r, R);
    norms[k] = lp_norm(diff, p, {-R, R});
  }
  double margin = std::numeric_limits<double>::infinity();
  Witness w;
  for (int k = 0; k < a.size(); ++k)
    for (int j = k + 1; j < a.size(); ++j) {
      if (a.times[k] <= 0.0) continue;
      const double slack = norms[k] + rate * (a.times[j] - a.times[k]) - norms[j];
      if (slack < margin) {
        margin = slack;
        w = {0.0, a.times[j]};
      }
    }
  auto rep = EstimateReport::make("lp-separation", margin, tol, w);
  rep.tolerances["rate"] = rate;
  return rep;
}

EstimateReport check_l1_separation_global(const Trajectory& a, const Trajectory& b, double tol) {
  if (!(a.grid() == b.grid()) || a.times != b.times)
    throw std::domain_error("check_l1_separation_global: trajectories must share grid and times");
  if (tol <= 0.0) tol = std::max(default_tol(a), default_tol(b));
  std::vector<double> norms(a.size());
  for (int k = 0; k < a.size(); ++k) {
    ScalarField diff = a.states[k];
    for (int i = 0; i < diff.size(); ++i) diff.values[i] -= b.states[k].values[i];
    norms[k] = l1_norm(diff);
  }
  double margin = std::numeric_limits<double>::infinity();
  Witness w;
  for (int k = 0; k < a.size(); ++k)
    for (int j = k + 1; j < a.size(); ++j) {
      const double slack = norms[k] + 2.0 * kPi * (a.times[j] - a.times[k]) - norms[j];
      if (slack < margin) {
        margin = slack;
        w = {0.0, a.times[j]};
      }
    }
  return EstimateReport::make("l1-separation-global", margin, tol, w);
}

double l1_separation_rate(const Trajectory& a, const Trajectory& b) {
  // least-squares slope of ||u1(t)-u2(t)||_1 against t
  const int K = a.size();
  std::vector<double> norms(K);
  for (int k = 0; k < K; ++k) {
    ScalarField diff = a.states[k];
    for (int i = 0; i < diff.size(); ++i) diff.values[i] -= b.states[k].values[i];
    norms[k] = l1_norm(diff);
  }
  double st = 0, sn = 0, stt = 0, stn = 0;
  for (int k = 0; k < K; ++k) {
    st += a.times[k];
    sn += norms[k];
    stt += a.times[k] * a.times[k];
    stn += a.times[k] * norms[k];
  }
  return (K * stn - st * sn) / (K * stt - st * st);
}

double mollifier(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  // unit-mass normalisation of exp(-1/(1-x^2))
  constexpr double kNorm = 2.2522836102950432;
  return kNorm * std::exp(-1.0 / (1.0 - x * x));
}

ScalarField spike_profile(const Grid1D& g, int n, double mass) {
  if (n < 1) throw std::domain_error("spike_profile: n must be >= 1");
  ScalarField f = ScalarField::sampled(g, [n](double x) { return n * mollifier(n * x); });
  const double measured = l1_norm(f);
  if (measured <= 0.0) throw std::domain_error("spike_profile: grid does not resolve the spike");
  for (double& v : f.values) v *= mass / measured;
  return f;
}

std::vector<SharpnessRow> sharpness_table(const std::vector<int>& n_values,
                                          const std::vector<Trajectory>& flows, double delta,
                                          double mass) {
  std::vector<SharpnessRow> rows;
  const double t_min = (1.0 + delta) * magic_time(mass);
  for (std::size_t j = 0; j < flows.size(); ++j) {
    const Trajectory& traj = flows[j];
    for (int k = 0; k < traj.size(); ++k) {
      SharpnessRow row;
      row.n = n_values[j];
      row.t = traj.times[k];
      row.height = std::abs(sample_linear(traj.states[k], 0.0));
      row.bound_applies = row.t >= t_min - 1e-12;
      row.bound = row.bound_applies ? delayed_height_bound(delta, mass, row.t)
                                    : std::numeric_limits<double>::quiet_NaN();
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace csf::estimates
