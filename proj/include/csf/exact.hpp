#pragma once

#include <optional>

#include "csf/geometry.hpp"
#include "csf/grid.hpp"

// Closed-form curve shortening flow solutions, used throughout as oracles,
// barriers and convergence references.

namespace csf::exact {

struct GrimReaperParams {
  double vertical_shift = 0.0;
};

struct AngenentOvalParams {
  double time_offset = -1.0;  // must stay < 0
  double vertical_shift = 0.0;
};

// Translating-soliton graph on (-1,1): y = L + pi t/2 - (2/pi) log cos(pi x/2).
// Throws std::domain_error for |x| >= 1.
double grim_reaper(double x, double t, double L = 0.0);
double grim_reaper_slope(double x);          // tan(pi x / 2)
double grim_reaper_residual(double x, double t);  // GCSF residual via analytic derivatives

// Upper branch of the Angenent oval at parameter s < 0:
// y = (2/pi) arccosh(e^{-pi^2 s/4} cos(pi x/2)), empty where the argument < 1.
// Throws std::domain_error for s >= 0.
std::optional<double> angenent_oval_upper(double x, double s);
double angenent_oval_halfwidth(double s);

// Full oval as a closed polyline (upper branch plus mirrored lower branch),
// resampled to uniform arclength.
Polyline angenent_oval_polyline(double s, double vertical_shift, int m);

// Circle of radius sqrt(r0^2 - 2t), or nothing at/after extinction t = r0^2/2.
std::optional<Polyline> shrinking_circle(Vec2 center, double r0, double t, int m = 256);

// Right-hand side of the Grim Reaper domination bound at horizon T.
double domination_envelope(double x, double L, double T);

// ∫ envelope over (x0, x1) for the same parameters (closed form pieces are
// not needed; high-resolution quadrature is fine at call sites — this is the
// exact antiderivative-free composite Simpson used for pad bounds).
double domination_envelope_integral(double x0, double x1, double L, double T);

}  // namespace csf::exact
