#include "csf/graphical.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <set>

#include "csf/parallel.hpp"

namespace csf::graphical {

namespace {

// In-place Thomas algorithm; the assembled system is strictly diagonally
// dominant (a in (0,1], dt > 0), so no pivoting is needed.
void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                       std::vector<double>& upper, std::vector<double>& rhs) {
  const int n = static_cast<int>(diag.size());
  for (int i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (int i = n - 2; i >= 0; --i) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

double boundary_value(const BoundaryCondition& bc, const ScalarField& u, bool leftside,
                      double t_new) {
  switch (bc.kind) {
    case BcKind::Zero:
      return 0.0;
    case BcKind::DirichletFixed:
      return leftside ? u.values.front() : u.values.back();
    case BcKind::DirichletOracle:
      return bc.oracle(leftside ? u.grid.left : u.grid.right, t_new);
  }
  return 0.0;
}

}  // namespace

const char* BoundaryCondition::name() const {
  switch (kind) {
    case BcKind::Zero: return "zero";
    case BcKind::DirichletFixed: return "dirichlet-fixed";
    case BcKind::DirichletOracle: return "dirichlet-oracle";
  }
  return "?";
}

SolverDivergence::SolverDivergence(double t)
    : std::runtime_error("graphical solver produced non-finite values at t = " +
                         std::to_string(t)),
      time(t) {}

// The divergence-form flux is arctan(v) at cell faces. One step solves the
// theta-implicit balance
//   u_new = u_old + (dt/dx) * D[ theta g(v_new) + (1-theta) g(v_old) ],
// g = arctan, by Newton iteration; each iterate freezes the face mobility
// a = 1/(1+v^2) at the current level and solves one tridiagonal system. The
// converged step telescopes mass exactly through face fluxes bounded by
// pi/2, obeys the discrete maximum principle, and keeps lines and constants
// steady to machine precision.
ScalarField step(const ScalarField& u, double dt, const BoundaryCondition& bc, double theta,
                 double t_old) {
  if (dt <= 0.0) throw std::invalid_argument("step: dt must be > 0");
  if (theta < 0.5 || theta > 1.0) throw std::invalid_argument("step: theta must be in [1/2,1]");
  const int n = u.size();
  const double dx = u.grid.dx();
  const double t_new = t_old + dt;

  // explicit part of the flux divergence, frozen at the old level
  std::vector<double> g_old(n - 1);
  par::for_each(n - 1, [&](std::ptrdiff_t i) {
    g_old[i] = std::atan((u.values[i + 1] - u.values[i]) / dx);
  });

  std::vector<double> w = u.values;  // Newton iterate for the new level
  w[0] = boundary_value(bc, u, true, t_new);
  w[n - 1] = boundary_value(bc, u, false, t_new);

  // interior residual of the implicit balance; infinity norm returned
  std::vector<double> res(n, 0.0);
  auto residual = [&](const std::vector<double>& cand) {
    par::for_each(n - 2, [&](std::ptrdiff_t k) {
      const int i = static_cast<int>(k) + 1;
      const double gp = std::atan((cand[i + 1] - cand[i]) / dx);
      const double gm = std::atan((cand[i] - cand[i - 1]) / dx);
      res[i] = cand[i] - u.values[i] -
               (dt / dx) * (theta * (gp - gm) + (1.0 - theta) * (g_old[i] - g_old[i - 1]));
    });
    double norm = 0.0;
    for (int i = 1; i + 1 < n; ++i) norm = std::max(norm, std::abs(res[i]));
    return norm;
  };

  std::vector<double> a(n - 1);
  std::vector<double> lower(n), diag(n), upper(n), rhs(n), trial(n);
  const double r = dt * theta / (dx * dx);
  const double tol = 1e-13 * (1.0 + u.max_abs());
  const double floor = 1e-11 * (1.0 + u.max_abs());  // roundoff plateau of the residual

  double norm = residual(w);
  for (int it = 0; it < 80; ++it) {
    if (norm <= tol) return ScalarField(u.grid, std::move(w));
    par::for_each(n - 1, [&](std::ptrdiff_t i) {
      const double v = (w[i + 1] - w[i]) / dx;
      a[i] = 1.0 / (1.0 + v * v);
    });
    par::for_each(n - 2, [&](std::ptrdiff_t k) {
      const int i = static_cast<int>(k) + 1;
      lower[i] = -r * a[i - 1];
      diag[i] = 1.0 + r * (a[i - 1] + a[i]);
      upper[i] = -r * a[i];
      rhs[i] = -res[i];
    });
    lower[0] = upper[0] = lower[n - 1] = upper[n - 1] = 0.0;
    diag[0] = diag[n - 1] = 1.0;
    rhs[0] = rhs[n - 1] = 0.0;  // boundary rows already satisfied
    solve_tridiagonal(lower, diag, upper, rhs);

    // backtracking keeps the iteration inside arctan's well-linearized zone
    double lambda = 1.0;
    bool reduced = false;
    for (int cut = 0; cut < 24; ++cut, lambda *= 0.5) {
      for (int i = 0; i < n; ++i) trial[i] = w[i] + lambda * rhs[i];
      const double trial_norm = residual(trial);
      if (trial_norm < norm) {
        w.swap(trial);
        norm = trial_norm;
        reduced = true;
        break;
      }
    }
    if (!reduced) break;  // at the roundoff plateau
  }
  if (norm <= floor) return ScalarField(u.grid, std::move(w));
  throw std::runtime_error("graphical step: Newton iteration failed to converge (residual " +
                           std::to_string(norm) + ")");
}

Trajectory solve(const ScalarField& u0, double t_end, const SolverOptions& opts) {
  if (t_end <= 0.0) throw std::invalid_argument("solve: t_end must be > 0");
  const double dx = u0.grid.dx();
  const double cruise = opts.dt_max > 0.0 ? std::min(opts.dt_max, dx) : dx;

  std::set<double> marks(opts.snapshot_times.begin(), opts.snapshot_times.end());
  for (double t : marks)
    if (t < 0.0 || t > t_end + 1e-12)
      throw std::invalid_argument("solve: snapshot times must lie in [0, t_end]");
  marks.insert(0.0);
  marks.insert(t_end);

  Trajectory traj;
  traj.meta.solver = "graphical-theta";
  traj.meta.theta = opts.theta;
  traj.meta.dt_max = cruise;
  traj.meta.dx = dx;
  traj.meta.bc = opts.bc.name();

  ScalarField u = u0;
  double t = 0.0;
  auto mark = marks.begin();
  if (*mark == 0.0) {
    traj.times.push_back(0.0);
    traj.states.push_back(u);
    ++mark;
  }

  // dt ramp: rough data carries unbounded curvature, so start at dx^2 and
  // grow geometrically to the cruise step.
  const double dt0 = std::min(dx * dx, cruise);
  const double grow = opts.ramp_steps > 0 && cruise > dt0
                          ? std::pow(cruise / dt0, 1.0 / opts.ramp_steps)
                          : 1.0;
  int k = 0;
  while (mark != marks.end()) {
    double dt = (k < opts.ramp_steps) ? dt0 * std::pow(grow, k) : cruise;
    bool at_mark = false;
    if (t + dt >= *mark - 1e-14) {
      dt = *mark - t;
      at_mark = true;
    }
    if (dt > 0.0) {
      u = step(u, dt, opts.bc, opts.theta, t);
      if (!u.all_finite()) throw SolverDivergence(t + dt);
    }
    t = at_mark ? *mark : t + dt;
    ++k;
    if (at_mark) {
      traj.times.push_back(t);
      traj.states.push_back(u);
      ++mark;
    }
  }
  return traj;
}

Trajectory rescale(const Trajectory& traj, double rho) {
  if (rho <= 0.0 || rho > 1.0) throw std::invalid_argument("rescale: rho must be in (0,1]");
  Trajectory out;
  out.meta = traj.meta;
  out.meta.solver += "+rescale";
  const Grid1D& g = traj.grid();
  const Grid1D gr(g.left / rho, g.right / rho, g.n);
  for (int k = 0; k < traj.size(); ++k) {
    std::vector<double> v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = traj.states[k].values[i] / rho;
    out.times.push_back(traj.times[k] / (rho * rho));
    out.states.push_back(ScalarField(gr, std::move(v)));
  }
  return out;
}

double pde_residual(const Trajectory& traj) {
  const int K = traj.size();
  if (K < 3) throw std::domain_error("pde_residual: need at least 3 snapshots");
  const Grid1D& g = traj.grid();
  const double dx = g.dx();
  const int ni = g.n - 2;

  return par::max(static_cast<std::ptrdiff_t>(K - 2) * ni, [&](std::ptrdiff_t idx) {
    const int k = 1 + static_cast<int>(idx / ni);
    const int i = 1 + static_cast<int>(idx % ni);
    const double h1 = traj.times[k] - traj.times[k - 1];
    const double h2 = traj.times[k + 1] - traj.times[k];
    const double f0 = traj.states[k - 1].values[i];
    const double f1 = traj.states[k].values[i];
    const double f2 = traj.states[k + 1].values[i];
    const double dt_u = -h2 / (h1 * (h1 + h2)) * f0 + (h2 - h1) / (h1 * h2) * f1 +
                        h1 / (h2 * (h1 + h2)) * f2;
    const double um = traj.states[k].values[i - 1];
    const double up = traj.states[k].values[i + 1];
    const double dxx = (up - 2.0 * f1 + um) / (dx * dx);
    const double dxc = (up - um) / (2.0 * dx);
    return std::abs(dt_u - dxx / (1.0 + dxc * dxc));
  });
}

}  // namespace csf::graphical
