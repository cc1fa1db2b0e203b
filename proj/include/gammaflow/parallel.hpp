#pragma once

#include <cstddef>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace gammaflow::parallel {

/// Applies GAMMAFLOW_THREADS (if set and positive) as the OpenMP thread cap.
void configure_from_env();

/// Keeps large work buffers on the heap instead of per-allocation mmap
/// (glibc only; a no-op elsewhere). Call once at startup.
void tune_allocator();

int max_threads();

/// Elements per reduction block. Partial sums are formed per block and then
/// added serially in block order, so results are bitwise independent of the
/// thread count.
inline constexpr std::ptrdiff_t kBlock = 4096;

/// Deterministic parallel sum of term(i) over [begin, end).
template <class Term>
double blocked_sum(std::ptrdiff_t begin, std::ptrdiff_t end, const Term& term) {
  if (end <= begin) return 0.0;
  const std::ptrdiff_t count = end - begin;
  const std::ptrdiff_t blocks = (count + kBlock - 1) / kBlock;
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static) if (blocks > 1)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::ptrdiff_t lo = begin + b * kBlock;
    const std::ptrdiff_t hi = lo + kBlock < end ? lo + kBlock : end;
    double s = 0.0;
    for (std::ptrdiff_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace gammaflow::parallel
