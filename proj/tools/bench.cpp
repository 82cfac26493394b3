#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "csf/curve.hpp"
#include "csf/estimates.hpp"
#include "csf/exact.hpp"
#include "csf/graphical.hpp"
#include "csf/grid.hpp"
#include "csf/measures.hpp"
#include "csf/parallel.hpp"

// Times the hot kernels with the OpenMP path against the serial reference.
// The chunked reductions are bit-identical either way; this only measures
// speed.

namespace {

double now() {
#ifdef _OPENMP
  return omp_get_wtime();
#else
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
#endif
}

template <class F>
double time_loop(F&& body, int reps) {
  body();  // warm up
  const double t0 = now();
  for (int r = 0; r < reps; ++r) body();
  return (now() - t0) / reps;
}

void report(const char* name, double serial, double omp) {
  std::printf("%-26s serial %10.4f ms   omp %10.4f ms   speedup %.2fx\n", name, 1e3 * serial,
              1e3 * omp, serial / omp);
}

}  // namespace

int main() {
  using namespace csf;
  std::printf("threads available: %d\n", par::thread_count());

  {  // quadrature reduction
    const Grid1D g(-6.0, 6.0, 2'000'001);
    const ScalarField f =
        ScalarField::sampled(g, [](double x) { return std::exp(-x * x) * std::sin(3 * x); });
    par::set_openmp_enabled(false);
    const double ts = time_loop([&] { l1_norm(f); }, 5);
    par::set_openmp_enabled(true);
    const double to = time_loop([&] { l1_norm(f); }, 5);
    report("l1_norm n=2e6", ts, to);
  }

  {  // one implicit step (assembly parallel, tridiagonal solve serial)
    const Grid1D g(-6.0, 6.0, 500'001);
    const ScalarField u = estimates::spike_profile(g, 16, 1.0);
    const auto bc = graphical::BoundaryCondition::zero();
    par::set_openmp_enabled(false);
    const double ts = time_loop([&] { graphical::step(u, 1e-4, bc); }, 5);
    par::set_openmp_enabled(true);
    const double to = time_loop([&] { graphical::step(u, 1e-4, bc); }, 5);
    report("graphical step n=5e5", ts, to);
  }

  {  // polyline curvature + advect
    const Polyline circle = *exact::shrinking_circle({0, 0}, 1.0, 0.0, 200'000);
    curve::CurveFlowOptions opts;
    par::set_openmp_enabled(false);
    const double ts = time_loop([&] { curve::csf_step(circle, 1e-9, opts); }, 5);
    par::set_openmp_enabled(true);
    const double to = time_loop([&] { curve::csf_step(circle, 1e-9, opts); }, 5);
    report("csf_step m=2e5", ts, to);
  }

  {  // measure mollification (CDF smoothing across the grid)
    measures::RadonMeasureSpec nu;
    measures::SingularCdf cdf;
    cdf.kind = measures::SingularCdf::Kind::Cantor;
    cdf.depth = 24;
    cdf.support = {0.0, 1.0};
    cdf.mass = 1.0;
    nu.singular = {cdf};
    const Grid1D g(-2.0, 3.0, 40'001);
    par::set_openmp_enabled(false);
    const double ts = time_loop([&] { measures::mollify(nu, 0.05, 2.0, g); }, 3);
    par::set_openmp_enabled(true);
    const double to = time_loop([&] { measures::mollify(nu, 0.05, 2.0, g); }, 3);
    report("mollify n=4e4", ts, to);
  }

  {  // residual scan over a trajectory
    const Grid1D g(-0.9, 0.9, 20'001);
    Trajectory traj;
    for (int k = 0; k < 9; ++k) {
      traj.times.push_back(0.1 + 0.01 * k);
      traj.states.push_back(ScalarField::sampled(
          g, [&](double x) { return exact::grim_reaper(x, 0.1 + 0.01 * k, 0.0); }));
    }
    par::set_openmp_enabled(false);
    const double ts = time_loop([&] { graphical::pde_residual(traj); }, 5);
    par::set_openmp_enabled(true);
    const double to = time_loop([&] { graphical::pde_residual(traj); }, 5);
    report("pde_residual 9x2e4", ts, to);
  }

  return 0;
}
