#include "csf/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "csf/estimates.hpp"
#include "csf/parallel.hpp"

namespace csf::measures {

namespace {
constexpr double kPi = std::numbers::pi;

double default_tol(const Trajectory& traj) {
  double sup = 0.0;
  for (const auto& s : traj.states) sup = std::max(sup, s.max_abs());
  return std::max(1e-6, 10.0 * (traj.meta.dx + traj.meta.dt_max) * (1.0 + sup));
}

// Exact cumulative integral of a piecewise-linear density (quadratic within
// each cell), O(1) per query after an O(n) precompute.
struct DensityCdf {
  const ScalarField* f = nullptr;
  std::vector<double> cum;
  bool absolute = false;

  explicit DensityCdf(const ScalarField* field, bool abs_part) : f(field), absolute(abs_part) {
    if (!f) return;
    ScalarField g = *f;
    if (absolute)
      for (double& v : g.values) v = std::abs(v);
    cum = cumulative_integral(g);
  }

  double operator()(double x) const {
    if (!f) return 0.0;
    const Grid1D& g = f->grid;
    if (x <= g.left) return 0.0;
    if (x >= g.right) return cum.back();
    const double s = (x - g.left) / g.dx();
    const int i = std::min(static_cast<int>(s), g.n - 2);
    const double h = x - g.node(i);
    double fa = f->values[i];
    double fb = f->values[i + 1];
    if (absolute) {
      fa = std::abs(fa);
      fb = std::abs(fb);
    }
    const double slope = (fb - fa) / g.dx();
    return cum[i] + fa * h + 0.5 * slope * h * h;
  }
};

}  // namespace

double cantor_cdf_unit(double x, int depth) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double value = 0.0;
  double scale = 0.5;
  for (int d = 0; d < depth; ++d) {
    if (x < 1.0 / 3.0) {
      x *= 3.0;
    } else if (x < 2.0 / 3.0) {
      return value + scale;
    } else {
      value += scale;
      x = 3.0 * x - 2.0;
    }
    scale *= 0.5;
  }
  return value + scale;
}

double SingularCdf::cdf(double x) const {
  switch (kind) {
    case Kind::Cantor: {
      const double w = support.b - support.a;
      return mass * cantor_cdf_unit((x - support.a) / w, depth);
    }
    case Kind::Staircase: {
      if (breakpoints.empty()) return 0.0;
      if (x <= breakpoints.front().first) return 0.0;
      if (x >= breakpoints.back().first) return breakpoints.back().second;
      auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(),
                                 std::make_pair(x, std::numeric_limits<double>::infinity()));
      const auto [xb, fb] = *it;
      const auto [xa, fa] = *(it - 1);
      return fa + (fb - fa) * (x - xa) / (xb - xa);
    }
  }
  return 0.0;
}

void validate(const RadonMeasureSpec& nu) {
  if (!nu.atoms.empty()) {
    std::ostringstream oss;
    oss << "measure has " << nu.atoms.size() << " atom(s); non-atomic data required (first at x = "
        << nu.atoms.front().first << ")";
    throw MeasureValidationError(oss.str());
  }
  for (const auto& s : nu.singular) {
    if (s.sign != 1 && s.sign != -1)
      throw MeasureValidationError("singular part sign must be +1 or -1");
    if (s.kind == SingularCdf::Kind::Cantor) {
      if (s.mass < 0.0) throw MeasureValidationError("cantor mass must be >= 0");
      if (!(s.support.a < s.support.b))
        throw MeasureValidationError("cantor support must be a proper interval");
      if (s.depth < 1) throw MeasureValidationError("cantor depth must be >= 1");
    } else {
      double prev_x = -std::numeric_limits<double>::infinity();
      double prev_f = 0.0;
      for (const auto& [x, f] : s.breakpoints) {
        if (x <= prev_x) throw MeasureValidationError("staircase breakpoints must increase");
        if (f < prev_f - 1e-15) throw MeasureValidationError("staircase CDF must be monotone");
        prev_x = x;
        prev_f = f;
      }
    }
  }
}

double signed_cdf(const RadonMeasureSpec& nu, double x) {
  DensityCdf dens(nu.density ? &*nu.density : nullptr, false);
  double v = dens(x);
  for (const auto& s : nu.singular) v += s.sign * s.cdf(x);
  return v;
}

double abs_cdf(const RadonMeasureSpec& nu, double x) {
  DensityCdf dens(nu.density ? &*nu.density : nullptr, true);
  double v = dens(x);
  for (const auto& s : nu.singular) v += s.cdf(x);
  return v;
}

double measure_of_interval(const RadonMeasureSpec& nu, double a, double b) {
  if (!(a < b)) throw std::domain_error("measure_of_interval: need a < b");
  validate(nu);
  return signed_cdf(nu, b) - signed_cdf(nu, a);
}

double total_variation_of_interval(const RadonMeasureSpec& nu, double a, double b) {
  if (!(a < b)) throw std::domain_error("total_variation_of_interval: need a < b");
  validate(nu);
  return abs_cdf(nu, b) - abs_cdf(nu, a);
}

double TestFunction::operator()(double x) const {
  const double y = (x - center) / halfwidth;
  if (std::abs(y) >= 1.0) return 0.0;
  if (kind == Kind::Hat) return 1.0 - std::abs(y);
  return std::exp(1.0 - 1.0 / (1.0 - y * y));
}

double TestFunction::derivative(double x) const {
  const double y = (x - center) / halfwidth;
  if (std::abs(y) >= 1.0) return 0.0;
  if (kind == Kind::Hat) return (y < 0.0 ? 1.0 : -1.0) / halfwidth;
  const double d = 1.0 - y * y;
  return std::exp(1.0 - 1.0 / d) * (-2.0 * y / (d * d)) / halfwidth;
}

double TestFunction::drift_constant() const {
  // unimodal with unit height: ∫|phi'| = 2, so C(phi) = pi
  return kPi;
}

TestFunctionBattery TestFunctionBattery::standard(Interval support) {
  const double c = 0.5 * (support.a + support.b);
  const double w = 0.5 * (support.b - support.a);
  TestFunctionBattery b;
  b.functions = {{TestFunction::Kind::Hat, c, w},
                 {TestFunction::Kind::Bump, c, w},
                 {TestFunction::Kind::Hat, c - w / 2.0, w / 2.0},
                 {TestFunction::Kind::Hat, c + w / 2.0, w / 2.0},
                 {TestFunction::Kind::Hat, c - w / 3.0, w / 4.0},
                 {TestFunction::Kind::Hat, c + w / 3.0, w / 4.0},
                 {TestFunction::Kind::Bump, c, w / 4.0}};
  return b;
}

double integral_against_measure(const TestFunction& phi, const RadonMeasureSpec& nu) {
  // ∫ phi d(nu) = -∫ phi'(x) F(x) dx with F the signed CDF. For hats phi' is
  // piecewise constant, so each half reduces to a plain integral of F and the
  // derivative jump at the centre costs no accuracy.
  DensityCdf dens(nu.density ? &*nu.density : nullptr, false);
  auto F = [&](double x) {
    double v = dens(x);
    for (const auto& sc : nu.singular) v += sc.sign * sc.cdf(x);
    return v;
  };
  auto trapz = [&](auto&& f, double a, double b) {
    const int N = 8192;
    const double h = (b - a) / N;
    return h * par::sum(N, [&](std::ptrdiff_t i) {
      return 0.5 * (f(a + i * h) + f(a + (i + 1) * h));
    });
  };
  const Interval s = phi.support();
  if (phi.kind == TestFunction::Kind::Hat) {
    const double c = 1.0 / phi.halfwidth;
    return -(c * trapz(F, s.a, phi.center) - c * trapz(F, phi.center, s.b));
  }
  return -trapz([&](double x) { return phi.derivative(x) * F(x); }, s.a, s.b);
}

namespace {

// Signed and dominating densities from one pass: both are assembled from the
// same smoothed positive/negative part increments, so |signed| <= dominating
// holds nodewise by construction.
std::pair<ScalarField, ScalarField> mollify_pair(const RadonMeasureSpec& nu, double epsilon,
                                                 double cutoff_radius, const Grid1D& out) {
  if (epsilon <= 0.0) throw std::domain_error("mollify: epsilon must be > 0");
  validate(nu);

  // The density is split nodewise and the singular CDFs by sign, all
  // restricted to the cutoff.
  ScalarField dens_pos, dens_neg;
  if (nu.density) {
    dens_pos = *nu.density;
    dens_neg = *nu.density;
    for (int i = 0; i < dens_pos.size(); ++i) {
      dens_pos.values[i] = std::max(nu.density->values[i], 0.0);
      dens_neg.values[i] = std::max(-nu.density->values[i], 0.0);
    }
  }
  DensityCdf cdf_pos(nu.density ? &dens_pos : nullptr, false);
  DensityCdf cdf_neg(nu.density ? &dens_neg : nullptr, false);

  auto part_cdf = [&](bool positive, double x) {
    x = std::clamp(x, -cutoff_radius, cutoff_radius);
    double v = positive ? cdf_pos(x) : cdf_neg(x);
    for (const auto& s : nu.singular)
      if ((s.sign > 0) == positive) v += s.cdf(x);
    return v;
  };

  // Fixed kernel quadrature with weights renormalized to exact unit mass, so
  // grid totals telescope to the measure's restricted mass to roundoff.
  constexpr int kQ = 129;
  std::vector<double> z(kQ), w(kQ);
  {
    double acc = 0.0;
    for (int k = 0; k < kQ; ++k) {
      z[k] = -1.0 + 2.0 * k / (kQ - 1);
      const double simpson = (k == 0 || k == kQ - 1) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      w[k] = simpson * estimates::mollifier(z[k]);
      acc += w[k];
    }
    for (double& x : w) x /= acc;
  }

  auto smoothed = [&](bool positive, double x) {
    double g = 0.0;
    for (int k = 0; k < kQ; ++k) g += w[k] * part_cdf(positive, x - epsilon * z[k]);
    return g;
  };

  std::vector<double> signed_vals(out.n), abs_vals(out.n);
  const double half = out.dx() / 2.0;
  par::for_each(out.n, [&](std::ptrdiff_t j) {
    const double x = out.node(static_cast<int>(j));
    const double pos = smoothed(true, x + half) - smoothed(true, x - half);
    const double neg = smoothed(false, x + half) - smoothed(false, x - half);
    signed_vals[j] = (pos - neg) / out.dx();
    abs_vals[j] = (pos + neg) / out.dx();
  });
  return {ScalarField(out, std::move(signed_vals)), ScalarField(out, std::move(abs_vals))};
}

}  // namespace

ScalarField mollify(const RadonMeasureSpec& nu, double epsilon, double cutoff_radius,
                    const Grid1D& out) {
  return mollify_pair(nu, epsilon, cutoff_radius, out).first;
}

ScalarField mollify_abs(const RadonMeasureSpec& nu, double epsilon, double cutoff_radius,
                        const Grid1D& out) {
  return mollify_pair(nu, epsilon, cutoff_radius, out).second;
}

double weak_gap(const RadonMeasureSpec& nu, const ScalarField& u,
                const TestFunctionBattery& battery) {
  double gap = 0.0;
  for (const auto& phi : battery.functions) {
    const double moment = weighted_integral(u, [&](double x) { return phi(x); });
    gap = std::max(gap, std::abs(moment - integral_against_measure(phi, nu)));
  }
  return gap;
}

EstimateReport check_weak_gap(const RadonMeasureSpec& nu, const Trajectory& traj,
                              const TestFunctionBattery& battery, double eps_floor,
                              double tol) {
  if (tol <= 0.0) tol = default_tol(traj);
  double max_c = 0.0, max_lip = 0.0;
  for (const auto& phi : battery.functions) {
    max_c = std::max(max_c, phi.drift_constant());
    max_lip = std::max(max_lip, 1.0 / phi.halfwidth);
  }
  double tv = 0.0;
  {
    const Grid1D& g = traj.grid();
    tv = total_variation_of_interval(nu, g.left, g.right);
  }
  const double moll = eps_floor * max_lip * tv;  // kernel transport of the initial gap

  double margin = std::numeric_limits<double>::infinity();
  Witness w;
  for (int k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k];
    if (t <= 0.0) continue;
    const double gap = weak_gap(nu, traj.states[k], battery);
    const double slack = max_c * t + moll - gap;
    if (slack < margin) {
      margin = slack;
      w = {0.0, t};
    }
  }
  auto r = EstimateReport::make("weak-gap", margin, tol, w);
  r.tolerances["mollification"] = moll;
  r.tolerances["max_c_phi"] = max_c;
  return r;
}

MeasureFlowResult flow_from_measure(const RadonMeasureSpec& nu, double t_end,
                                    const std::vector<double>& epsilons,
                                    const MeasureFlowOptions& opts) {
  validate(nu);
  if (epsilons.empty()) throw std::domain_error("flow_from_measure: need epsilons");
  for (std::size_t i = 1; i < epsilons.size(); ++i)
    if (epsilons[i] >= epsilons[i - 1])
      throw std::domain_error("flow_from_measure: epsilons must decrease");

  // support bounds
  double lo = 0.0, hi = 0.0;
  bool have = false;
  if (nu.density) {
    lo = nu.density->grid.left;
    hi = nu.density->grid.right;
    have = true;
  }
  for (const auto& s : nu.singular) {
    lo = have ? std::min(lo, s.support.a) : s.support.a;
    hi = have ? std::max(hi, s.support.b) : s.support.b;
    have = true;
  }
  if (!have) throw std::domain_error("flow_from_measure: empty measure");

  const double cutoff =
      opts.cutoff_radius > 0.0 ? opts.cutoff_radius : std::max(std::abs(lo), std::abs(hi)) + 1.0;
  const double eps_fine = epsilons.back();
  const double dx = opts.dx > 0.0 ? opts.dx : eps_fine / 10.0;
  const double left = lo - epsilons.front() - opts.pad;
  const double right = hi + epsilons.front() + opts.pad;
  const int n = static_cast<int>(std::ceil((right - left) / dx)) + 1;
  const Grid1D grid(left, left + (n - 1) * dx, n);

  MeasureFlowResult out;
  out.epsilons = epsilons;
  out.required_ratio = opts.required_ratio;

  graphical::SolverOptions sopts;
  sopts.bc = graphical::BoundaryCondition::zero();
  sopts.snapshot_times = opts.snapshot_times;

  for (double eps : epsilons) {
    const auto [u0, U0] = mollify_pair(nu, eps, cutoff, grid);
    out.flows.push_back(graphical::solve(u0, t_end, sopts));
    out.dominated.push_back(graphical::solve(U0, t_end, sopts));
  }

  Interval probe = opts.probe;
  if (probe.width() <= 0.0) probe = {lo - 0.5, hi + 0.5};
  int j0 = std::max(0, static_cast<int>(std::ceil((probe.a - grid.left) / dx)));
  int j1 = std::min(grid.n - 1, static_cast<int>(std::floor((probe.b - grid.left) / dx)));

  for (std::size_t e = 0; e + 1 < out.flows.size(); ++e) {
    CauchyRung rung{epsilons[e], epsilons[e + 1], 0.0};
    const Trajectory& a = out.flows[e];
    const Trajectory& b = out.flows[e + 1];
    for (int k = 0; k < a.size(); ++k) {
      if (a.times[k] <= 0.0) continue;
      for (int j = j0; j <= j1; ++j)
        rung.distance =
            std::max(rung.distance, std::abs(a.states[k].values[j] - b.states[k].values[j]));
    }
    out.cauchy.push_back(rung);
  }
  out.cauchy_ok = true;
  for (std::size_t e = 0; e + 1 < out.cauchy.size(); ++e) {
    const double ratio = out.cauchy[e].distance / std::max(out.cauchy[e + 1].distance, 1e-300);
    if (ratio < opts.required_ratio) out.cauchy_ok = false;
  }
  return out;
}

EstimateReport strong_convergence_check(const Trajectory& traj, const ScalarField& u0,
                                        Interval region, double p,
                                        const RadonMeasureSpec* nu, double tol) {
  if (nu) {
    for (const auto& s : nu->singular)
      if (region.b > s.support.a && region.a < s.support.b)
        throw std::domain_error("strong_convergence_check: region meets the singular support");
  }
  if (tol <= 0.0) tol = 10.0 * default_tol(traj);

  std::vector<std::pair<double, double>> gaps;  // (t, ||u(t)-u0||_p(region))
  for (int k = 0; k < traj.size(); ++k) {
    if (traj.times[k] <= 0.0) continue;
    ScalarField diff = traj.states[k];
    for (int i = 0; i < diff.size(); ++i)
      diff.values[i] -= u0.grid.contains(diff.grid.node(i)) ? sample_linear(u0, diff.grid.node(i))
                                                            : 0.0;
    gaps.emplace_back(traj.times[k], lp_norm(diff, p, region));
  }
  if (gaps.size() < 2)
    return EstimateReport::inconclusive("strong-convergence", "need >= 2 positive-time snapshots");

  bool monotone = true;
  for (std::size_t k = 1; k < gaps.size(); ++k)
    if (gaps[k].second < gaps[k - 1].second - 0.1 * tol) monotone = false;
  const double final_gap = gaps.front().second;  // smallest positive time
  auto r = EstimateReport::make("strong-convergence", tol - final_gap, 0.0,
                                {0.5 * (region.a + region.b), gaps.front().first});
  r.tolerances["tol"] = tol;
  if (!monotone) {
    r.passed = false;
    r.status = "fail";
    r.note = "gap not non-increasing toward t=0";
  }
  return r;
}

std::vector<TraceRow> initial_trace(const Trajectory& traj, const TestFunctionBattery& battery,
                                    const RadonMeasureSpec* known) {
  std::vector<int> ks;
  for (int k = 0; k < traj.size(); ++k)
    if (traj.times[k] > 0.0) ks.push_back(k);
  if (ks.size() < 2) throw std::domain_error("initial_trace: need >= 2 positive-time snapshots");
  const int fit_count = std::min<int>(5, static_cast<int>(ks.size()));

  std::vector<TraceRow> rows;
  for (const auto& phi : battery.functions) {
    double st = 0, sm = 0, stt = 0, stm = 0;
    for (int q = 0; q < fit_count; ++q) {
      const int k = ks[q];
      const double m =
          weighted_integral(traj.states[k], [&](double x) { return phi(x); });
      st += traj.times[k];
      sm += m;
      stt += traj.times[k] * traj.times[k];
      stm += traj.times[k] * m;
    }
    TraceRow row;
    row.phi = phi;
    row.drift = (fit_count * stm - st * sm) / (fit_count * stt - st * st);
    row.limit = (sm - row.drift * st) / fit_count;
    row.error_bar = phi.drift_constant() * traj.times[ks.front()];
    row.expected = known ? integral_against_measure(phi, *known)
                         : std::numeric_limits<double>::quiet_NaN();
    rows.push_back(row);
  }
  return rows;
}

EstimateReport check_dominated(const Trajectory& u, const Trajectory& U, double tol) {
  if (!(u.grid() == U.grid()) || u.times != U.times)
    throw std::domain_error("check_dominated: trajectories must share grid and times");
  if (tol <= 0.0) tol = default_tol(u);
  double margin = std::numeric_limits<double>::infinity();
  Witness w;
  for (int k = 0; k < u.size(); ++k)
    for (int i = 0; i < u.grid().n; ++i) {
      const double slack = U.states[k].values[i] - std::abs(u.states[k].values[i]);
      if (slack < margin) {
        margin = slack;
        w = {u.grid().node(i), u.times[k]};
      }
    }
  return EstimateReport::make("dominated", margin, tol, w);
}

}  // namespace csf::measures
