#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "csf/curve.hpp"
#include "csf/exact.hpp"
#include "csf/graphical.hpp"
#include "csf/grid.hpp"
#include "csf/parallel.hpp"

using namespace csf;

// The OpenMP kernels must reproduce the serial reference bit for bit: maps
// are elementwise and reductions use fixed chunking with ordered combine.

namespace {
struct OmpGuard {
  bool saved;
  OmpGuard() : saved(par::openmp_enabled()) {}
  ~OmpGuard() { par::set_openmp_enabled(saved); }
};
}  // namespace

TEST_CASE("chunked sum is identical with OpenMP on and off") {
  OmpGuard guard;
  auto term = [](std::ptrdiff_t i) { return std::sin(0.001 * i) / (1.0 + 0.01 * i); };
  for (std::ptrdiff_t n : {10L, 1000L, 100000L, 1234567L}) {
    par::set_openmp_enabled(false);
    const double a = par::sum(n, term);
    const double a_ref = par::serial::sum(n, term);
    par::set_openmp_enabled(true);
    const double b = par::sum(n, term);
    CHECK(a == a_ref);
    CHECK(a == b);
  }
}

TEST_CASE("min/max reductions agree with the serial reference") {
  OmpGuard guard;
  auto term = [](std::ptrdiff_t i) { return std::cos(0.37 * i) * (i % 97); };
  par::set_openmp_enabled(true);
  CHECK(par::min(500000, term) == par::serial::min(500000, term));
  CHECK(par::max(500000, term) == par::serial::max(500000, term));
}

TEST_CASE("solver step is bitwise identical with OpenMP on and off") {
  OmpGuard guard;
  const Grid1D g(-1.0, 1.0, 5001);
  const ScalarField u =
      ScalarField::sampled(g, [](double x) { return std::exp(-20.0 * x * x); });
  const auto bc = graphical::BoundaryCondition::zero();
  par::set_openmp_enabled(false);
  const ScalarField a = graphical::step(u, 1e-5, bc);
  par::set_openmp_enabled(true);
  const ScalarField b = graphical::step(u, 1e-5, bc);
  for (int i = 0; i < g.n; ++i) CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("curvature kernel is bitwise identical with OpenMP on and off") {
  OmpGuard guard;
  const Polyline circle = *exact::shrinking_circle({0, 0}, 1.0, 0.0, 4096);
  par::set_openmp_enabled(false);
  const auto ka = curve::curvature_vectors(circle);
  par::set_openmp_enabled(true);
  const auto kb = curve::curvature_vectors(circle);
  for (std::size_t i = 0; i < ka.size(); ++i) {
    CHECK(ka[i].x == kb[i].x);
    CHECK(ka[i].y == kb[i].y);
  }
}
