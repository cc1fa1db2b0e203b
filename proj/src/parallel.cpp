#include "gammaflow/parallel.hpp"

#include <cstdlib>
#include <string>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace gammaflow::parallel {

void configure_from_env() {
  const char* raw = std::getenv("GAMMAFLOW_THREADS");
  if (raw == nullptr) return;
  char* end = nullptr;
  const long n = std::strtol(raw, &end, 10);
  if (end == raw || n <= 0) return;
#if defined(_OPENMP)
  omp_set_num_threads(static_cast<int>(n));
#endif
}

void tune_allocator() {
#if defined(__GLIBC__)
  // Solver work vectors of a few MB are allocated every iteration; with the
  // default threshold each one is a fresh mmap and page-faults on first touch.
  mallopt(M_MMAP_THRESHOLD, 256 << 20);
  mallopt(M_TRIM_THRESHOLD, 512 << 20);
#endif
}

int max_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace gammaflow::parallel
