#pragma once

#include <optional>
#include <string>
#include <vector>

#include "csf/graphical.hpp"
#include "csf/grid.hpp"
#include "csf/report.hpp"
#include "csf/trajectory.hpp"

// Non-atomic real-valued Radon measures on R: density part plus singular
// continuous CDF parts (atoms representable only so validation can reject
// them), mollification to smooth compactly supported data, the flow pipeline
// with dominating companion flows, weak-gap and strong-convergence checks,
// and initial-trace extraction.

namespace csf::measures {

struct SingularCdf {
  enum class Kind { Cantor, Staircase };
  Kind kind = Kind::Cantor;
  int depth = 30;                 // Cantor recursion depth
  Interval support{0.0, 1.0};
  double mass = 1.0;
  int sign = +1;
  std::vector<std::pair<double, double>> breakpoints;  // staircase (x, F(x)), F continuous

  // Cumulative mass of the unsigned part over (-inf, x]; continuous by
  // construction. The signed contribution is sign * cdf.
  double cdf(double x) const;
};

struct RadonMeasureSpec {
  std::optional<ScalarField> density;
  std::vector<SingularCdf> singular;
  std::vector<std::pair<double, double>> atoms;  // (position, mass); must be empty
};

struct MeasureValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rejects atoms and malformed singular parts.
void validate(const RadonMeasureSpec& nu);

double measure_of_interval(const RadonMeasureSpec& nu, double a, double b);
double total_variation_of_interval(const RadonMeasureSpec& nu, double a, double b);

// Signed CDF of nu evaluated at x (density part integrated from its left edge).
double signed_cdf(const RadonMeasureSpec& nu, double x);
double abs_cdf(const RadonMeasureSpec& nu, double x);

// Compactly supported piecewise-smooth test function with C(phi) known in
// closed form: a hat or a smooth bump of unit height.
struct TestFunction {
  enum class Kind { Hat, Bump };
  Kind kind = Kind::Hat;
  double center = 0.0;
  double halfwidth = 1.0;

  double operator()(double x) const;
  double derivative(double x) const;
  double drift_constant() const;  // (pi/2) ∫ |phi'| = pi for unit height
  Interval support() const { return {center - halfwidth, center + halfwidth}; }
};

struct TestFunctionBattery {
  std::vector<TestFunction> functions;
  static TestFunctionBattery standard(Interval support);  // 7 hats/bumps, 3 scales
};

// ∫ phi d(nu) via exact integration by parts against the CDFs.
double integral_against_measure(const TestFunction& phi, const RadonMeasureSpec& nu);

// Mollified density on the output grid: restrict to [-cutoff, cutoff], split
// into positive/negative parts, convolve each CDF with a smooth unit-mass
// kernel of width epsilon, recombine, then difference the smoothed CDF across
// cells so that grid mass telescopes exactly.
ScalarField mollify(const RadonMeasureSpec& nu, double epsilon, double cutoff_radius,
                    const Grid1D& out);
// Same kernel applied to |nu|; dominates |mollify(nu,...)| nodewise.
ScalarField mollify_abs(const RadonMeasureSpec& nu, double epsilon, double cutoff_radius,
                        const Grid1D& out);

// max over the battery of |∫ phi u - ∫ phi d nu|.
double weak_gap(const RadonMeasureSpec& nu, const ScalarField& u,
                const TestFunctionBattery& battery);
EstimateReport check_weak_gap(const RadonMeasureSpec& nu, const Trajectory& traj,
                              const TestFunctionBattery& battery, double eps_floor,
                              double tol = 0.0);

struct CauchyRung {
  double eps_coarse, eps_fine;
  double distance;  // max over probe times of Linf distance on the probe window
};

struct MeasureFlowResult {
  std::vector<double> epsilons;
  std::vector<Trajectory> flows;      // signed flow per epsilon
  std::vector<Trajectory> dominated;  // companion flow of |nu| per epsilon
  std::vector<CauchyRung> cauchy;
  bool cauchy_ok = false;             // every rung shrank by >= the required factor
  double required_ratio = 2.0;
  const Trajectory& finest() const { return flows.back(); }
  const Trajectory& finest_dominating() const { return dominated.back(); }
};

struct MeasureFlowOptions {
  double cutoff_radius = 0.0;         // 0 -> cover the support
  double pad = 3.0;                   // domain padding beyond the cutoff
  double dx = 0.0;                    // 0 -> finest epsilon / 10
  std::vector<double> snapshot_times;
  Interval probe{0.0, 0.0};           // 0-width -> support inflated by 0.5
  double required_ratio = 2.0;
};

MeasureFlowResult flow_from_measure(const RadonMeasureSpec& nu, double t_end,
                                    const std::vector<double>& epsilons,
                                    const MeasureFlowOptions& opts = {});

// ||u(t) - u0||_{Lp(region)} must decrease to <= tol as t -> 0; region must
// avoid the singular support (checked when the measure is supplied).
EstimateReport strong_convergence_check(const Trajectory& traj, const ScalarField& u0,
                                        Interval region, double p,
                                        const RadonMeasureSpec* nu = nullptr,
                                        double tol = 0.0);

struct TraceRow {
  TestFunction phi;
  double limit;        // extrapolated L(phi)
  double drift;        // linear-fit slope in t
  double error_bar;    // C(phi) * t_min
  double expected;     // ∫ phi d nu when the measure is known (else NaN)
};

std::vector<TraceRow> initial_trace(const Trajectory& traj, const TestFunctionBattery& battery,
                                    const RadonMeasureSpec* known = nullptr);

EstimateReport check_dominated(const Trajectory& u, const Trajectory& U, double tol = 0.0);

// Cantor function on [0,1] (support-rescaled), by ternary digit walk.
double cantor_cdf_unit(double x, int depth);

}  // namespace csf::measures
