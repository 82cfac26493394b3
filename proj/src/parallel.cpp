#include "csf/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace csf::par {

namespace {
bool g_enabled = true;
}

bool openmp_enabled() {
#ifdef _OPENMP
  return g_enabled;
#else
  return false;
#endif
}

void set_openmp_enabled(bool on) { g_enabled = on; }

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace csf::par
