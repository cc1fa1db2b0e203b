// OpenMP kernels against the serial reference loops, energy and gradient.

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "gammaflow/energy.hpp"
#include "gammaflow/kernels.hpp"
#include "gammaflow/schedule.hpp"

using namespace gammaflow;

namespace {

struct Setup {
  LocalEnergy energy;
  std::vector<double> u, grad;
  double h;

  Setup(std::size_t n, int k)
      : energy(perona_malik_density(make_schedule(1e-6), k)), u(n), grad(n), h(1.0 / static_cast<double>(n - 1)) {
    for (std::size_t i = 0; i < n; ++i) u[i] = std::sin(7.0 * h * static_cast<double>(i)) + (i > n / 2 ? 1.0 : 0.0);
  }
};

template <bool Parallel, bool Gradient>
void BM_evaluate(benchmark::State& state) {
  Setup s(static_cast<std::size_t>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    EnergyParts p;
    if constexpr (Parallel && Gradient) p = kernels::evaluate(s.energy, s.u, s.h, s.grad);
    else if constexpr (Parallel) p = kernels::evaluate(s.energy, s.u, s.h);
    else if constexpr (Gradient) p = reference::evaluate(s.energy, s.u, s.h, s.grad);
    else p = reference::evaluate(s.energy, s.u, s.h);
    benchmark::DoNotOptimize(p);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (int k : {1, 2, 4})
    for (long n : {1L << 12, 1L << 16, 1L << 20}) b->Args({n, k});
}

}  // namespace

BENCHMARK(BM_evaluate<false, false>)->Name("reference/energy")->Apply(sizes);
BENCHMARK(BM_evaluate<true, false>)->Name("kernels/energy")->Apply(sizes);
BENCHMARK(BM_evaluate<false, true>)->Name("reference/gradient")->Apply(sizes);
BENCHMARK(BM_evaluate<true, true>)->Name("kernels/gradient")->Apply(sizes);

BENCHMARK_MAIN();
