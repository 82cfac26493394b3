#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "csf/grid.hpp"

using namespace csf;
using Catch::Approx;

TEST_CASE("grid invariants are enforced") {
  CHECK_THROWS_AS(Grid1D(1.0, -1.0, 11), std::invalid_argument);
  CHECK_THROWS_AS(Grid1D(0.0, 1.0, 2), std::invalid_argument);
  const Grid1D g(-1.0, 1.0, 5);
  CHECK(g.dx() == Approx(0.5));
  CHECK(g.node(0) == -1.0);
  CHECK(g.node(4) == 1.0);
}

TEST_CASE("l1 norm: constant and linear integrands") {
  const Grid1D g(-1.0, 1.0, 401);
  const ScalarField one = ScalarField::sampled(g, [](double) { return 1.0; });
  CHECK(l1_norm(one, {-1.0, 1.0}) == Approx(2.0).epsilon(1e-14));

  const ScalarField lin = ScalarField::sampled(g, [](double x) { return x; });
  // |x| has its kink at a node, so trapezoid integrates it exactly
  CHECK(l1_norm(lin, {-1.0, 1.0}) == Approx(1.0).epsilon(1e-14));
  CHECK(integral(lin, {-1.0, 1.0}) == Approx(0.0).margin(1e-15));
}

TEST_CASE("l1 norm of a hat is the exact triangle area") {
  const Grid1D g(-1.0, 1.0, 801);
  const ScalarField hat =
      ScalarField::sampled(g, [](double x) { return std::max(0.0, 1.0 - std::abs(x)); });
  CHECK(l1_norm(hat, {-1.0, 1.0}) == Approx(1.0).margin(1e-6));
}

TEST_CASE("l1 norm over sub-intervals with off-node endpoints") {
  const Grid1D g(0.0, 1.0, 101);
  const ScalarField one = ScalarField::sampled(g, [](double) { return 1.0; });
  CHECK(l1_norm(one, {0.123, 0.877}) == Approx(0.754).epsilon(1e-12));
  CHECK_THROWS_AS(l1_norm(one, {-0.5, 0.5}), std::domain_error);
}

TEST_CASE("lp norm examples") {
  const Grid1D g(-1.0, 1.0, 801);
  const ScalarField one = ScalarField::sampled(g, [](double) { return 1.0; });
  CHECK(lp_norm(one, 2.0, {-1.0, 1.0}) == Approx(std::sqrt(2.0)).epsilon(1e-12));

  const ScalarField lin = ScalarField::sampled(g, [](double x) { return x; });
  CHECK(lp_norm(lin, 2.0, {-1.0, 1.0}) == Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-5));

  // p = 1 agrees with the l1 norm to machine precision
  const ScalarField hat =
      ScalarField::sampled(g, [](double x) { return std::max(0.0, 1.0 - std::abs(x)); });
  CHECK(lp_norm(hat, 1.0, {-1.0, 1.0}) == Approx(l1_norm(hat, {-1.0, 1.0})).epsilon(1e-15));
}

TEST_CASE("linear interpolation reproduces nodes and midpoints") {
  const Grid1D g(0.0, 1.0, 11);
  const ScalarField f = ScalarField::sampled(g, [](double x) { return 3.0 * x - 1.0; });
  CHECK(sample_linear(f, g.node(4)) == Approx(f.values[4]));
  CHECK(sample_linear(f, 0.45) == Approx(0.5 * (f.values[4] + f.values[5])));
  CHECK_THROWS_AS(sample_linear(f, 1.5), std::domain_error);
}

TEST_CASE("linear interpolation error on a quadratic is O(dx^2)") {
  const Grid1D g(-1.0, 1.0, 801);
  const ScalarField f = ScalarField::sampled(g, [](double x) { return x * x; });
  const double q = 0.1234;
  CHECK(std::abs(sample_linear(f, q) - q * q) < g.dx() * g.dx());
}

TEST_CASE("cumulative integral matches direct quadrature") {
  const Grid1D g(0.0, 2.0, 201);
  const ScalarField f = ScalarField::sampled(g, [](double x) { return std::sin(x); });
  const auto cum = cumulative_integral(f);
  CHECK(cum.back() == Approx(integral(f, {0.0, 2.0})).epsilon(1e-14));
  CHECK(cum[100] == Approx(integral(f, {0.0, 1.0})).epsilon(1e-12));
}
