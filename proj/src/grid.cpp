#include "csf/grid.hpp"

#include <algorithm>
#include <cmath>

#include "csf/parallel.hpp"

namespace csf {

Grid1D::Grid1D(double left_, double right_, int n_) : left(left_), right(right_), n(n_) {
  if (!(left < right)) throw std::invalid_argument("Grid1D: left must be < right");
  if (n < 3) throw std::invalid_argument("Grid1D: need at least 3 nodes");
  if (!std::isfinite(left) || !std::isfinite(right))
    throw std::invalid_argument("Grid1D: endpoints must be finite");
}

ScalarField::ScalarField(Grid1D g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != grid.n)
    throw std::invalid_argument("ScalarField: value count must match grid node count");
}

ScalarField ScalarField::zeros(const Grid1D& g) {
  return ScalarField(g, std::vector<double>(g.n, 0.0));
}

ScalarField ScalarField::sampled(const Grid1D& g, const std::function<double(double)>& f) {
  std::vector<double> v(g.n);
  for (int i = 0; i < g.n; ++i) v[i] = f(g.node(i));
  return ScalarField(g, std::move(v));
}

double ScalarField::max_abs() const {
  return par::max(size(), [&](std::ptrdiff_t i) { return std::abs(values[i]); });
}

bool ScalarField::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

double sample_linear(const ScalarField& f, double x) {
  const Grid1D& g = f.grid;
  const double eps = 1e-12 * (g.right - g.left);
  if (x < g.left - eps || x > g.right + eps)
    throw std::domain_error("sample_linear: query outside grid span");
  x = std::clamp(x, g.left, g.right);
  const double s = (x - g.left) / g.dx();
  int i = std::min(static_cast<int>(s), g.n - 2);
  const double w = s - i;
  return (1.0 - w) * f.values[i] + w * f.values[i + 1];
}

namespace {

// Trapezoid of `vals` interpreted on f's grid over [sub.a, sub.b] with the
// boundary fragments integrated from the linear interpolant.
double trapezoid_sub(const ScalarField& f, Interval sub, const std::function<double(double)>& tr) {
  const Grid1D& g = f.grid;
  const double eps = 1e-12 * (g.right - g.left);
  if (sub.a < g.left - eps || sub.b > g.right + eps || !(sub.a < sub.b))
    throw std::domain_error("quadrature: sub-interval outside grid span");
  const double a = std::clamp(sub.a, g.left, g.right);
  const double b = std::clamp(sub.b, g.left, g.right);
  const double dx = g.dx();

  const int ia = static_cast<int>(std::ceil((a - g.left) / dx - 1e-12));
  const int ib = static_cast<int>(std::floor((b - g.left) / dx + 1e-12));
  if (ia > ib) {
    // both endpoints inside one cell
    const double fa = tr(sample_linear(f, a));
    const double fb = tr(sample_linear(f, b));
    return 0.5 * (fa + fb) * (b - a);
  }

  double total = 0.0;
  const double xa = g.node(ia);
  if (a < xa - 1e-14 * dx) {
    const double fa = tr(sample_linear(f, a));
    total += 0.5 * (fa + tr(f.values[ia])) * (xa - a);
  }
  const double xb = g.node(ib);
  if (b > xb + 1e-14 * dx) {
    const double fb = tr(sample_linear(f, b));
    total += 0.5 * (tr(f.values[ib]) + fb) * (b - xb);
  }
  total += dx * par::sum(ib - ia, [&](std::ptrdiff_t k) {
    const int i = ia + static_cast<int>(k);
    return 0.5 * (tr(f.values[i]) + tr(f.values[i + 1]));
  });
  return total;
}

}  // namespace

double integral(const ScalarField& f, Interval sub) {
  return trapezoid_sub(f, sub, [](double v) { return v; });
}

double l1_norm(const ScalarField& f, Interval sub) {
  return trapezoid_sub(f, sub, [](double v) { return std::abs(v); });
}

double lp_norm(const ScalarField& f, double p, Interval sub) {
  if (p < 1.0) throw std::domain_error("lp_norm: p must be >= 1");
  if (p == 1.0) return l1_norm(f, sub);
  const double s = trapezoid_sub(f, sub, [p](double v) { return std::pow(std::abs(v), p); });
  return std::pow(s, 1.0 / p);
}

double integral(const ScalarField& f) { return integral(f, {f.grid.left, f.grid.right}); }
double l1_norm(const ScalarField& f) { return l1_norm(f, {f.grid.left, f.grid.right}); }

double weighted_integral(const ScalarField& u, const std::function<double(double)>& phi) {
  const Grid1D& g = u.grid;
  const double dx = g.dx();
  return dx * par::sum(g.n - 1, [&](std::ptrdiff_t i) {
    const double fa = phi(g.node(static_cast<int>(i))) * u.values[i];
    const double fb = phi(g.node(static_cast<int>(i) + 1)) * u.values[i + 1];
    return 0.5 * (fa + fb);
  });
}

std::vector<double> cumulative_integral(const ScalarField& f) {
  const double dx = f.grid.dx();
  std::vector<double> out(f.size(), 0.0);
  for (int i = 1; i < f.size(); ++i)
    out[i] = out[i - 1] + 0.5 * dx * (f.values[i - 1] + f.values[i]);
  return out;
}

std::vector<double> slopes(const ScalarField& f) {
  const int n = f.size();
  const double dx = f.grid.dx();
  std::vector<double> v(n);
  v[0] = (f.values[1] - f.values[0]) / dx;
  v[n - 1] = (f.values[n - 1] - f.values[n - 2]) / dx;
  par::for_each(n - 2, [&](std::ptrdiff_t k) {
    const int i = static_cast<int>(k) + 1;
    v[i] = (f.values[i + 1] - f.values[i - 1]) / (2.0 * dx);
  });
  return v;
}

}  // namespace csf
