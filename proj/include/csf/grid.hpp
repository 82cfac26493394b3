#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace csf {

// Uniform 1-D grid with node positions left + i*dx, dx = (right-left)/(n-1).
struct Grid1D {
  double left = 0.0;
  double right = 1.0;
  int n = 3;

  Grid1D() = default;
  Grid1D(double left_, double right_, int n_);

  double dx() const { return (right - left) / (n - 1); }
  double node(int i) const { return left + i * dx(); }
  bool contains(double x) const { return x >= left && x <= right; }
  bool operator==(const Grid1D& o) const {
    return left == o.left && right == o.right && n == o.n;
  }
};

struct Interval {
  double a = 0.0;
  double b = 0.0;
  double width() const { return b - a; }
};

// Sampled graphing function u on a uniform grid; piecewise linear between
// nodes. Immutable by convention once built (operations return new fields).
struct ScalarField {
  Grid1D grid;
  std::vector<double> values;

  ScalarField() = default;
  ScalarField(Grid1D g, std::vector<double> v);

  static ScalarField zeros(const Grid1D& g);
  static ScalarField sampled(const Grid1D& g, const std::function<double(double)>& f);

  int size() const { return grid.n; }
  double max_abs() const;
  bool all_finite() const;
};

// Piecewise-linear interpolation; throws std::domain_error outside the span.
double sample_linear(const ScalarField& f, double x);

// Composite trapezoid quadrature over a sub-interval of the grid span.
// Partial cells at the sub-interval ends are handled by interpolation, so the
// rule stays exact for piecewise-linear integrands with grid-aligned kinks.
double integral(const ScalarField& f, Interval sub);
double l1_norm(const ScalarField& f, Interval sub);
double lp_norm(const ScalarField& f, double p, Interval sub);

// Whole-span conveniences.
double integral(const ScalarField& f);
double l1_norm(const ScalarField& f);

// ∫ phi·u dx over u's span, phi evaluated at u's nodes.
double weighted_integral(const ScalarField& u, const std::function<double(double)>& phi);

// Running trapezoid integral from the left edge; result[i] = ∫_{x_0}^{x_i} f.
std::vector<double> cumulative_integral(const ScalarField& f);

// Central-difference slope (one-sided at the edges).
std::vector<double> slopes(const ScalarField& f);

}  // namespace csf
