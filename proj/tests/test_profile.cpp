#include <cmath>

#include "doctest.h"

#include "gammaflow/error.hpp"
#include "gammaflow/profile.hpp"
#include "gammaflow/rational_polynomial.hpp"

using namespace gammaflow;

TEST_SUITE("profile") {

TEST_CASE("exact linear solve") {
  std::vector<std::vector<mpq_class>> a{{0, 2}, {3, 1}};
  const auto x = solve_exact(a, {4, 5});
  CHECK(x[0] == 1);
  CHECK(x[1] == 2);
  CHECK_THROWS_AS(solve_exact({{1, 2}, {2, 4}}, {1, 1}), InternalError);
}

TEST_CASE("polynomial arithmetic") {
  const RationalPolynomial p({1, 2, 3});
  CHECK(p.degree() == 2);
  CHECK(p.derivative() == RationalPolynomial({2, 6}));
  CHECK(p.derivative(3).is_zero());
  CHECK(p.integrate_unit() == mpq_class(3));
  CHECK(p.compose_affine(1, -1) == RationalPolynomial({6, -8, 3}));
  CHECK((p - p).is_zero());
  CHECK((p * p).degree() == 4);
  CHECK(p(mpq_class(1, 2)) == mpq_class(11, 4));
}

TEST_CASE("hermite profile, k = 2") {
  CHECK(hermite_profile(2) == RationalPolynomial({0, 0, 3, -2}));
  CHECK(hermite_profile(1) == RationalPolynomial({0, 1}));
  CHECK_THROWS_AS(hermite_profile(0), DomainError);
  CHECK_THROWS_AS(hermite_profile(13), DomainError);
}

TEST_CASE("profile invariants, k = 1..12") {
  for (int k = 1; k <= kMaxOrder; ++k) {
    const RationalPolynomial v = hermite_profile(k);
    CHECK(v.degree() == 2 * k - 1);
    CHECK(v(0) == 0);
    CHECK(v(1) == 1);
    for (int l = 1; l < k; ++l) {
      CHECK(v.derivative(l)(0) == 0);
      CHECK(v.derivative(l)(1) == 0);
    }
    // v(s) + v(1 - s) = 1 identically.
    CHECK(v + v.compose_affine(1, -1) == RationalPolynomial({1}));
    CHECK(derivative_energy_constant(k) == mpq_class(derivative_energy_closed_form(k)));
  }
  CHECK(derivative_energy_constant(1) == 1);
  CHECK(derivative_energy_constant(2) == 12);
  CHECK(derivative_energy_constant(3) == 720);
  CHECK(derivative_energy_constant(4) == 100800);
}

TEST_CASE("optimal lengths and values") {
  CHECK(m_const(1).T_star == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m_const(1).m_k == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(m_const(2).T_star == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
  CHECK(m_const(2).m_k == doctest::Approx(3.26598632371).epsilon(1e-11));
  CHECK(m_const(3).T_star == doctest::Approx(3.91486764117).epsilon(1e-11));
  CHECK(m_const(3).m_k == doctest::Approx(4.69784116940).epsilon(1e-11));
  CHECK(m_const(4).T_star == doctest::Approx(5.38356327096).epsilon(1e-11));
  CHECK(m_const(4).m_k == doctest::Approx(6.15264373823).epsilon(1e-11));
}

TEST_CASE("homogeneity in the jump size") {
  for (int k = 1; k <= 4; ++k) {
    const OptimalProfile& p = m_const(k);
    for (double z : {0.5, 1.0, 2.0}) {
      // min_T T + c z^2 T^{1-2k} is attained at z^{1/k} T_star with value m z^{1/k}.
      const WeightedOptimum w = weighted_optimum(k, z * z);
      CHECK(w.T == doctest::Approx(std::pow(z, 1.0 / k) * p.T_star).epsilon(1e-12));
      CHECK(w.value == doctest::Approx(p.m_k * std::pow(z, 1.0 / k)).epsilon(1e-12));
      const double T = w.T;
      CHECK(T + transition_energy(k, T) * z * z == doctest::Approx(w.value).epsilon(1e-12));
    }
  }
}

TEST_CASE("scaled constant") {
  for (int k = 1; k <= 4; ++k) {
    CHECK(m_scaled(k, {1.0, 1.0}) == doctest::Approx(m_const(k).m_k).epsilon(1e-15));
  }
  CHECK(m_scaled(2, {1.0, 2.0}) == doctest::Approx(m_const(2).m_k / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(m_scaled(2, {2.0, 1.0}) == doctest::Approx(m_const(2).m_k * std::pow(2.0, -0.25)).epsilon(1e-14));
  CHECK(m_const(2).value_at(0.0, 2.0) == 0.0);
  CHECK(m_const(2).value_at(5.0, 2.0) == 1.0);
  CHECK(m_const(2).value_at(1.0, 2.0) == doctest::Approx(0.5));
}

}
