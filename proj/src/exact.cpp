#include "csf/exact.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace csf::exact {

namespace {
constexpr double kPi = std::numbers::pi;

// Linear resample of a vertex chain to m points at uniform arclength.
Polyline resample_uniform_linear(const std::vector<Vec2>& pts, bool closed, int m) {
  const int n = static_cast<int>(pts.size());
  std::vector<double> s(n + (closed ? 1 : 0), 0.0);
  const int segs = closed ? n : n - 1;
  for (int i = 0; i < segs; ++i) s[i + 1] = s[i] + (pts[(i + 1) % n] - pts[i]).norm();
  const double total = s[segs];
  const int out_n = m;
  std::vector<Vec2> out(out_n);
  int cell = 0;
  const int samples = closed ? out_n : out_n - 1;
  for (int k = 0; k < out_n; ++k) {
    const double target = total * (closed ? static_cast<double>(k) / samples
                                          : static_cast<double>(k) / samples);
    while (cell + 1 < segs && s[cell + 1] < target) ++cell;
    const double w = (s[cell + 1] > s[cell]) ? (target - s[cell]) / (s[cell + 1] - s[cell]) : 0.0;
    const Vec2 a = pts[cell % n];
    const Vec2 b = pts[(cell + 1) % n];
    out[k] = a + (b - a) * w;
  }
  return Polyline(std::move(out), closed);
}

// ∫_0^x -(2/pi) log cos(pi u / 2) du for x in [-1, 1] (odd in x). The
// integrand has a log singularity at |u| = 1, split off analytically.
double log_cos_primitive(double x) {
  const double sign = x < 0 ? -1.0 : 1.0;
  x = std::abs(x);
  if (x > 1.0) throw std::domain_error("log_cos_primitive: |x| must be <= 1");

  auto simpson = [](auto&& f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return acc * h / 3.0;
  };
  auto g = [](double u) { return -(2.0 / kPi) * std::log(std::cos(kPi * u / 2.0)); };

  const double split = 0.9;
  if (x <= split) return sign * simpson(g, 0.0, x, 256);

  double acc = simpson(g, 0.0, split, 256);
  // u = 1 - v: -log cos(pi u/2) = -log(pi v/2) - log(sin(pi v/2)/(pi v/2))
  const double v0 = 1.0 - x;  // lower bound in v
  const double v1 = 1.0 - split;
  acc += -(2.0 / kPi) * ((v1 * (std::log(kPi * v1 / 2.0) - 1.0)) -
                         (v0 > 0 ? v0 * (std::log(kPi * v0 / 2.0) - 1.0) : 0.0));
  auto smooth = [](double v) {
    const double w = kPi * v / 2.0;
    const double ratio = (w < 1e-8) ? 1.0 - w * w / 6.0 : std::sin(w) / w;
    return -(2.0 / kPi) * std::log(ratio);
  };
  acc += simpson(smooth, v0, v1, 128);
  return sign * acc;
}

}  // namespace

double grim_reaper(double x, double t, double L) {
  if (std::abs(x) >= 1.0) throw std::domain_error("grim_reaper: |x| must be < 1");
  return L + kPi * t / 2.0 - (2.0 / kPi) * std::log(std::cos(kPi * x / 2.0));
}

double grim_reaper_slope(double x) {
  if (std::abs(x) >= 1.0) throw std::domain_error("grim_reaper_slope: |x| must be < 1");
  return std::tan(kPi * x / 2.0);
}

double grim_reaper_residual(double x, double t) {
  (void)t;  // the profile translates: d_t u = pi/2 at every time
  const double v = grim_reaper_slope(x);
  const double uxx = (kPi / 2.0) * (1.0 + v * v);
  return kPi / 2.0 - uxx / (1.0 + v * v);
}

double angenent_oval_halfwidth(double s) {
  if (s >= 0.0) throw std::domain_error("angenent_oval: s must be < 0");
  return (2.0 / kPi) * std::acos(std::exp(kPi * kPi * s / 4.0));
}

std::optional<double> angenent_oval_upper(double x, double s) {
  if (s >= 0.0) throw std::domain_error("angenent_oval: s must be < 0");
  const double c = std::cos(kPi * x / 2.0);
  if (c <= 0.0) return std::nullopt;
  double z = std::exp(-kPi * kPi * s / 4.0) * c;
  if (z < 1.0) {
    if (z < 1.0 - 1e-12) return std::nullopt;
    z = 1.0;  // waist: arccosh(1) = 0
  }
  return (2.0 / kPi) * std::log(z + std::sqrt(z * z - 1.0));
}

Polyline angenent_oval_polyline(double s, double vertical_shift, int m) {
  const double xm = angenent_oval_halfwidth(s);
  const int fine = std::max(4 * m, 1024);
  std::vector<Vec2> pts;
  pts.reserve(2 * fine);
  // cosine-spaced x clusters samples at the vertical tangents
  for (int k = 0; k < fine; ++k) {
    const double x = -xm * std::cos(kPi * k / (fine - 1));
    const double y = angenent_oval_upper(x, s).value_or(0.0);
    pts.push_back({x, y + vertical_shift});
  }
  for (int k = fine - 2; k >= 1; --k) {
    const double x = -xm * std::cos(kPi * k / (fine - 1));
    const double y = angenent_oval_upper(x, s).value_or(0.0);
    pts.push_back({x, -y + vertical_shift});
  }
  return resample_uniform_linear(pts, /*closed=*/true, m);
}

std::optional<Polyline> shrinking_circle(Vec2 center, double r0, double t, int m) {
  if (r0 <= 0.0) throw std::domain_error("shrinking_circle: r0 must be > 0");
  const double r2 = r0 * r0 - 2.0 * t;
  if (r2 <= 0.0) return std::nullopt;
  const double r = std::sqrt(r2);
  std::vector<Vec2> pts(m);
  for (int k = 0; k < m; ++k) {
    const double a = 2.0 * kPi * k / m;
    pts[k] = {center.x + r * std::cos(a), center.y + r * std::sin(a)};
  }
  return Polyline(std::move(pts), /*closed=*/true);
}

double domination_envelope(double x, double L, double T) { return grim_reaper(x, T, L); }

double domination_envelope_integral(double x0, double x1, double L, double T) {
  if (x0 < -1.0 || x1 > 1.0 || !(x0 < x1))
    throw std::domain_error("domination_envelope_integral: need -1 <= x0 < x1 <= 1");
  const double base = (L + kPi * T / 2.0) * (x1 - x0);
  return base + log_cos_primitive(x1) - log_cos_primitive(x0);
}

}  // namespace csf::exact
