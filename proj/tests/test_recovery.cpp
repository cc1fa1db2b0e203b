#include <cmath>

#include "doctest.h"

#include "gammaflow/energy.hpp"
#include "gammaflow/error.hpp"
#include "gammaflow/recovery.hpp"

using namespace gammaflow;

TEST_SUITE("recovery") {

TEST_CASE("flatten") {
  const SbvSignal u = step_signal(0.5, 1.0, 0.0);
  const SbvSignal f = flatten(u, 0.1, 0.0);
  REQUIRE(f.jumps().size() == 1);
  CHECK(f.jumps()[0].eta == doctest::Approx(0.1));
  CHECK(f.plateaus_valid());
  CHECK(f.jumps()[0].z == 1.0);
  // Small jumps are removed, larger ones kept.
  const SbvSignal two = staircase_signal({{0.3, 0.01, 0.0}, {0.7, 2.0, 0.0}});
  const SbvSignal g = flatten(two, 0.05, 0.1);
  REQUIRE(g.jumps().size() == 1);
  CHECK(g.jumps()[0].z == 2.0);
  // Compliant input comes back unchanged.
  const SbvSignal ok = step_signal(0.5, 1.0, 0.2);
  CHECK(flatten(ok, 0.1, 0.0).jumps()[0].eta == 0.2);
  // Affine parts are stretched: Dirichlet energy scales with the stretch.
  const SbvSignal ramp_step({PolySegment{0.0, 0.5, {0.0, 1.0}}, PolySegment{0.5, 1.0, {1.5, 1.0}}},
                            {{0.5, 1.0, 0.0}});
  const SbvSignal r = flatten(ramp_step, 0.1, 0.0);
  CHECK(r.dirichlet() == doctest::Approx(1.0 / (1.0 - 0.2)).epsilon(1e-12));
}

TEST_CASE("window geometry and exactness off the window") {
  const SbvSignal u = step_signal(0.5, 1.0, 0.1, 2.0);
  const EpsSchedule s = make_schedule(1e-6);
  const OptimalProfile& p = m_const(2);
  const CompositeSignal r = build_recovery(u, s, p);
  const double W = window_width(1e-6, 1.0, p);
  CHECK(W == doctest::Approx(1e-6 * p.T_star));
  CHECK(r.begin() == 0.0);
  CHECK(r.end() == doctest::Approx(1.0));
  for (const Signal& piece : r.pieces) {
    const bool window = piece.grid.length < 1e-3;
    for (std::size_t i = 0; i < piece.size(); ++i) {
      const double x = piece.grid.x(i);
      if (!window) {
        const double v = piece.values[i];
        CHECK((v == u.value(x) || (x > 0.0 && v == u.left_limit(x))));
      }
    }
    if (window) {
      CHECK(piece.values.front() == 2.0);
      CHECK(piece.values.back() == 3.0);
      CHECK(piece.grid.origin == 0.5);
    }
  }
  CHECK(l1_distance(r, u) == doctest::Approx(W * 0.5).epsilon(1e-6));
}

TEST_CASE("admissibility") {
  const SbvSignal u = step_signal(0.5, 1.0, 1e-9);
  CHECK_THROWS_AS(build_recovery(u, make_schedule(1e-4), m_const(2)), DomainError);
  CHECK_THROWS_AS(build_recovery_surface(affine_signal(0.0, 1.0), 1e-4, m_const(2)), DomainError);
}

TEST_CASE("recovery energy regression, unit jump") {
  const SbvSignal u = step_signal(0.5, 1.0, 0.1);
  const EpsSchedule s = make_schedule(1e-4);
  const double e1 = perona_malik_energy(build_recovery(u, s, m_const(1)), s, 1);
  const double e2 = perona_malik_energy(build_recovery(u, s, m_const(2)), s, 2);
  CHECK(e1 == doctest::Approx(2.241070098823568).epsilon(1e-10));
  CHECK(e2 == doctest::Approx(3.271337797317172).epsilon(1e-10));
  // Every recovery energy is an upper bound for the limit at these eps.
  for (int n = 5; n <= 12; ++n) {
    const EpsSchedule t = make_schedule(std::pow(10.0, -n));
    CHECK(perona_malik_energy(build_recovery(u, t, m_const(1)), t, 1) > 2.0);
  }
}

TEST_CASE("bulk part converges to the Dirichlet energy") {
  const SbvSignal a = affine_signal(0.0, 1.0);
  for (int n : {4, 8, 12}) {
    const EpsSchedule s = make_schedule(std::pow(10.0, -n));
    const double e = perona_malik_energy(build_recovery(a, s, m_const(2)), s, 2);
    CHECK(e <= 1.0);
    CHECK(e == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("surface recovery") {
  const SbvSignal u = staircase_signal({{0.3, 1.0, 0.1}, {0.7, 4.0, 0.1}});
  const CompositeSignal r = build_recovery_surface(u, 1e-8, m_const(2));
  const double e = surface_scaled_energy(r, 1e-8, 2);
  CHECK(e == doctest::Approx(9.541486728531796).epsilon(1e-10));
  CHECK(e < surface_limit_energy(u, 2));
}

}
