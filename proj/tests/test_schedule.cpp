#include <cmath>

#include "doctest.h"

#include "gammaflow/error.hpp"
#include "gammaflow/schedule.hpp"

using namespace gammaflow;

TEST_SUITE("schedule") {

TEST_CASE("canonical values at eps = 1e-6") {
  const EpsSchedule s = make_schedule(1e-6);
  CHECK(s.log_abs() == doctest::Approx(13.815510557964274).epsilon(1e-14));
  CHECK(s.log_log_abs() == doctest::Approx(2.625791914476).epsilon(1e-11));
  CHECK(s.p_eps == doctest::Approx(0.43596004004249195).epsilon(1e-13));
  CHECK(s.c_eps == doctest::Approx(2.4223659865054282e-3).epsilon(1e-12));
  CHECK(s.subcritical());
  CHECK(mn_lemma_ratios(s).r_a == doctest::Approx(3.3466e-2).epsilon(1e-4));
}

TEST_CASE("c = eps^p and the threshold") {
  for (int n = 3; n <= 15; ++n) {
    const double eps = std::pow(10.0, -n);
    const EpsSchedule s = make_schedule(eps);
    CHECK(s.c_eps == doctest::Approx(std::pow(eps, s.p_eps)).epsilon(1e-15));
    CHECK(s.threshold() == doctest::Approx(s.c_eps / eps).epsilon(1e-15));
    CHECK(s.p_eps == doctest::Approx(canonical_exponent(eps)).epsilon(1e-15));
  }
}

TEST_CASE("admissible range") {
  CHECK_THROWS_AS(make_schedule(0.0), DomainError);
  CHECK_THROWS_AS(make_schedule(-1e-3), DomainError);
  CHECK_THROWS_AS(make_schedule(0.1), DomainError);
  CHECK_NOTHROW(make_schedule(max_admissible_eps()));
  // At e^-e the canonical exponent is sqrt(1/e) > 1/2.
  CHECK(make_schedule(max_admissible_eps()).p_eps == doctest::Approx(std::sqrt(1.0 / std::exp(1.0))));
  CHECK_FALSE(make_schedule(max_admissible_eps()).subcritical());
  CHECK_THROWS_AS(make_schedule(1e-6, 0.0), DomainError);
  CHECK_THROWS_AS(make_schedule(1e-6, 1.0), DomainError);
  CHECK(make_schedule(1e-6, 0.25).c_eps == doctest::Approx(std::pow(1e-6, 0.25)));
}

TEST_CASE("ratio limits along eps = 10^-n") {
  double prev_a = INFINITY, prev_b = -INFINITY;
  for (int n = 3; n <= 15; ++n) {
    const EpsSchedule s = make_schedule(std::pow(10.0, -n));
    const MnRatios r = mn_lemma_ratios(s);
    CHECK(r.r_a < prev_a);
    CHECK(r.r_b > prev_b);
    CHECK(r.r_b < 1.0);
    const double bound = 2.0 * (s.log_log_abs() + 2.0 * std::abs(std::log(s.c_eps))) / s.log_abs();
    CHECK(1.0 - r.r_b <= bound);
    prev_a = r.r_a;
    prev_b = r.r_b;
  }
  CHECK(mn_lemma_ratios(make_schedule(1e-12)).r_b == doctest::Approx(0.4271).epsilon(1e-3));
}

TEST_CASE("pointwise bound, truncated form") {
  const EpsSchedule s = make_schedule(1e-8);
  CHECK(sub_prop_holds(s, 0.5, 0.0));
  CHECK_FALSE(sub_prop_holds_max_form(s, 0.5, 0.0));
  CHECK(sub_prop_holds(s, 0.5, 1.0));
  // At the threshold both branches equal 1/eps and the left side is r_b/eps.
  const double rb = mn_lemma_ratios(s).r_b;
  for (double eta : {0.3, 0.5, 0.7, 0.9}) {
    CHECK(sub_prop_holds(s, eta, s.threshold()) == (rb >= 1.0 - eta));
  }
  CHECK(truncated_quadratic(s, 1e30) == doctest::Approx(1.0 / s.eps));
  CHECK(log_density(s, -3.0) == log_density(s, 3.0));
}

}
