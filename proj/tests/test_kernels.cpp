#include <cmath>
#include <random>

#include <omp.h>

#include "doctest.h"

#include "gammaflow/energy.hpp"
#include "gammaflow/error.hpp"
#include "gammaflow/kernels.hpp"
#include "gammaflow/objectives.hpp"

using namespace gammaflow;

namespace {

std::vector<double> random_signal(std::size_t n, unsigned seed, double amp) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amp, amp);
  std::vector<double> u(n);
  double acc = 0.0;
  for (double& v : u) v = (acc += dist(rng));
  return u;
}

std::vector<LocalEnergy> all_densities(int k) {
  const EpsSchedule s = make_schedule(1e-4);
  return {perona_malik_density(s, k), truncated_quadratic_density(1e-4, k), threshold_lower_bound_density(s, k),
          surface_scaled_density(1e-4, k), weighted_perona_malik_density(s, k, {2.0, 0.5})};
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("difference stencils") {
  CHECK(difference_stencil(1) == std::vector<double>{-1, 1});
  CHECK(difference_stencil(3) == std::vector<double>{-1, 3, -3, 1});
  const std::vector<double> u{0, 1, 4, 9, 16, 25};
  const auto d2 = reference::kth_differences(u, 1.0, 2);
  for (double v : d2) CHECK(v == 2.0);
  std::vector<double> out(4);
  kernels::kth_differences(u, 1.0, 2, out);
  CHECK(out == d2);
}

TEST_CASE("parallel kernels match the serial reference") {
  for (int k = 1; k <= 4; ++k) {
    for (const LocalEnergy& e : all_densities(k)) {
      for (std::size_t n : {std::size_t{17}, std::size_t{5000}, std::size_t{20011}}) {
        const auto u = random_signal(n, 11 + k, 1e-3);
        const double h = 1.0 / static_cast<double>(n - 1);
        std::vector<double> g1(n), g2(n);
        const EnergyParts a = kernels::evaluate(e, u, h, g1);
        const EnergyParts b = reference::evaluate(e, u, h, g2);
        CHECK(a.bulk == doctest::Approx(b.bulk).epsilon(1e-12));
        CHECK(a.penalty == doctest::Approx(b.penalty).epsilon(1e-10));
        double gmax = 0.0, diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          gmax = std::max(gmax, std::abs(g2[i]));
          diff = std::max(diff, std::abs(g1[i] - g2[i]));
        }
        CHECK(diff <= 1e-10 * gmax);
        const EnergyParts c = kernels::evaluate(e, u, h);
        CHECK(c.bulk == a.bulk);
        CHECK(c.penalty == a.penalty);
      }
    }
  }
}

TEST_CASE("kernel results do not depend on the thread count") {
  const auto u = random_signal(100003, 5, 1e-4);
  const double h = 1.0 / 100002.0;
  const LocalEnergy e = perona_malik_density(make_schedule(1e-6), 3);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  std::vector<double> g1(u.size()), g4(u.size());
  const EnergyParts a = kernels::evaluate(e, u, h, g1);
  omp_set_num_threads(4);
  const EnergyParts b = kernels::evaluate(e, u, h, g4);
  omp_set_num_threads(saved);
  CHECK(a.bulk == b.bulk);
  CHECK(a.penalty == b.penalty);
  CHECK(g1 == g4);
}

TEST_CASE("density values") {
  const EpsSchedule s = make_schedule(1e-6);
  const double L = s.log_abs();
  const LocalEnergy pm = perona_malik_density(s, 2);
  CHECK(density_value(pm.density, 3.0) == doctest::Approx(std::log1p(1e-6 * L * 9.0) / (1e-6 * L)));
  CHECK(pm.penalty == doctest::Approx(1e-18));
  const LocalEnergy tq = truncated_quadratic_density(1e-4, 1);
  CHECK(density_value(tq.density, 10.0) == 100.0);
  CHECK(density_value(tq.density, 1000.0) == doctest::Approx(1e4));
  CHECK(density_slope(tq.density, 1000.0) == 0.0);
  const LocalEnergy ss = surface_scaled_density(1e-4, 2);
  CHECK(density_value(ss.density, 1.0) == doctest::Approx(std::log(2.0) / (2e-4 * std::abs(std::log(1e-4)))));
}

TEST_CASE("surface scaling dominates the log density when eps|log eps| <= 1") {
  const EpsSchedule s = make_schedule(1e-5);
  const auto u = random_signal(2001, 3, 0.2);
  const Signal sig(Grid1D::unit(2001), u);
  CHECK(surface_scaled_energy(sig, 1e-5, 2) >= perona_malik_energy(sig, s, 2));
}

TEST_CASE("restriction and differences") {
  const Signal u = Signal::sample(Grid1D::unit(101), [](double x) { return x * x; });
  CHECK(d1(u).size() == 100);
  CHECK(dk(u, 2)[7] == doctest::Approx(2.0));
  CHECK_THROWS_AS(dk(Signal(Grid1D::unit(3), {0, 1, 2}), 3), DomainError);
  const double full = threshold_lower_bound_energy(u, make_schedule(1e-4), 2);
  const double half = threshold_lower_bound_energy(u, make_schedule(1e-4), 2, {0.0, 0.5});
  CHECK(half < full);
  CHECK(half > 0.0);
}

TEST_CASE("analytic gradients match central differences") {
  for (int k = 1; k <= 4; ++k) {
    for (const LocalEnergy& e : all_densities(k)) {
      for (unsigned trial = 0; trial < 10; ++trial) {
        const std::size_t n = 64 + 8 * trial;
        NodeEnergy en(e, Grid1D::unit(n));
        en.set_fidelity(10.0, random_signal(n, 100 + trial, 0.02));
        const auto x = random_signal(n, trial, 0.02);
        CHECK(grad_check(en, x) <= 1e-6);
      }
    }
  }
}

}
