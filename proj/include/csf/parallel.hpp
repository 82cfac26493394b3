#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

// Shared-memory kernel layer. Every hot loop in the library funnels through
// these helpers so that the OpenMP build and the serial reference produce
// bit-identical results: reductions are chunked with a fixed chunk size and
// the partial results are combined in chunk order, independent of the number
// of threads. The plain serial versions live in csf::par::serial and are the
// reference the unit tests and the benchmark compare against.

namespace csf::par {

inline constexpr std::ptrdiff_t kChunk = 1024;

bool openmp_enabled();
void set_openmp_enabled(bool on);
int thread_count();

namespace serial {

template <class F>
void for_each(std::ptrdiff_t n, F&& body) {
  for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
}

template <class F>
double sum(std::ptrdiff_t n, F&& term) {
  const std::ptrdiff_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(static_cast<std::size_t>(std::max<std::ptrdiff_t>(chunks, 1)), 0.0);
  for (std::ptrdiff_t c = 0; c < chunks; ++c) {
    const std::ptrdiff_t lo = c * kChunk;
    const std::ptrdiff_t hi = std::min(lo + kChunk, n);
    double s = 0.0;
    for (std::ptrdiff_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(c)] = s;
  }
  double total = 0.0;
  for (std::ptrdiff_t c = 0; c < chunks; ++c) total += partial[static_cast<std::size_t>(c)];
  return total;
}

template <class F>
double min(std::ptrdiff_t n, F&& term) {
  double m = std::numeric_limits<double>::infinity();
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::min(m, term(i));
  return m;
}

template <class F>
double max(std::ptrdiff_t n, F&& term) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, term(i));
  return m;
}

}  // namespace serial

template <class F>
void for_each(std::ptrdiff_t n, F&& body) {
  if (!openmp_enabled() || n < 2 * kChunk) {
    serial::for_each(n, body);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
}

template <class F>
double sum(std::ptrdiff_t n, F&& term) {
  if (!openmp_enabled() || n < 2 * kChunk) return serial::sum(n, term);
  const std::ptrdiff_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < chunks; ++c) {
    const std::ptrdiff_t lo = c * kChunk;
    const std::ptrdiff_t hi = std::min(lo + kChunk, n);
    double s = 0.0;
    for (std::ptrdiff_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(c)] = s;
  }
  double total = 0.0;
  for (std::ptrdiff_t c = 0; c < chunks; ++c) total += partial[static_cast<std::size_t>(c)];
  return total;
}

template <class F>
double min(std::ptrdiff_t n, F&& term) {
  if (!openmp_enabled() || n < 2 * kChunk) return serial::min(n, term);
  const std::ptrdiff_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(static_cast<std::size_t>(chunks),
                              std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < chunks; ++c) {
    const std::ptrdiff_t lo = c * kChunk;
    const std::ptrdiff_t hi = std::min(lo + kChunk, n);
    double m = std::numeric_limits<double>::infinity();
    for (std::ptrdiff_t i = lo; i < hi; ++i) m = std::min(m, term(i));
    partial[static_cast<std::size_t>(c)] = m;
  }
  double total = std::numeric_limits<double>::infinity();
  for (double m : partial) total = std::min(total, m);
  return total;
}

template <class F>
double max(std::ptrdiff_t n, F&& term) {
  return -min(n, [&](std::ptrdiff_t i) { return -term(i); });
}

}  // namespace csf::par
