#include <cmath>

#include "doctest.h"

#include "gammaflow/densities.hpp"
#include "gammaflow/error.hpp"
#include "gammaflow/profile.hpp"

using namespace gammaflow;

namespace {

SolverBudget light() {
  SolverBudget b;
  b.nodes_per_unit = 1001.0;
  b.grid_points = 25;
  return b;
}

}  // namespace

TEST_SUITE("densities") {

TEST_CASE("ell(k)") {
  CHECK(ell_of_k(2) == 1);
  CHECK(ell_of_k(3) == 1);
  CHECK(ell_of_k(4) == 2);
  CHECK(ell_of_k(5) == 2);
  CHECK_THROWS_AS(ell_of_k(1), DomainError);
}

TEST_CASE("clamped surrogate equals the closed form") {
  SolverBudget b;
  for (int k : {2, 3}) {
    const DensityValue v = phi_N(1.0, {kUnbounded, 0.5, k}, b);
    CHECK(v.converged);
    CHECK(std::abs(v.value - m_const(k).m_k) / m_const(k).m_k <= 1e-3);
    CHECK(v.T == doctest::Approx(m_const(k).T_star).epsilon(2e-2));
  }
  const DensityValue m = m_of_N({kUnbounded, 0.5, 2}, b);
  CHECK(std::abs(m.value - m_const(2).m_k) / m_const(2).m_k <= 1e-3);
}

TEST_CASE("ordering in N and the envelope") {
  const SolverBudget b = light();
  const double m2 = m_const(2).m_k;
  const double n1 = phi_N(1.0, {1.0, 0.5, 2}, b).value;
  const double n4 = phi_N(1.0, {4.0, 0.5, 2}, b).value;
  CHECK(n1 > 0.0);
  CHECK(n1 <= m2 + 1e-3);
  CHECK(n4 >= n1 - 2e-3);
  CHECK(phi_N(0.25, {8.0, 0.5, 2}, b).value <= m2 * 0.5 + 1e-3);
  const double mN1 = m_of_N({1.0, 0.5, 2}, b).value;
  CHECK(mN1 > 0.0);
  CHECK(mN1 <= m2 + 1e-3);
}

TEST_CASE("k = 4 monotonicity of m(N)") {
  const SolverBudget b = light();
  const double a = m_of_N({4.0, 0.5, 4}, b).value;
  const double c = m_of_N({16.0, 0.5, 4}, b).value;
  CHECK(c >= a - 1e-3);
  CHECK(c <= m_const(4).m_k + 1e-3);
}

TEST_CASE("evenness") {
  const SolverBudget b = light();
  CHECK(phi_N(-0.5, {2.0, 0.5, 2}, b).value == doctest::Approx(phi_N(0.5, {2.0, 0.5, 2}, b).value).epsilon(1e-6));
  CHECK(psi_theta_N(-2.0, {8.0, 0.5, 2}, b).value ==
        doctest::Approx(psi_theta_N(2.0, {8.0, 0.5, 2}, b).value).epsilon(1e-6));
  const EpsSchedule s = make_schedule(1e-6);
  CHECK(phi_eps_N(-1.0, s, {4.0, 0.5, 3}, b).value ==
        doctest::Approx(phi_eps_N(1.0, s, {4.0, 0.5, 3}, b).value).epsilon(1e-6));
}

TEST_CASE("psi branches") {
  const SolverBudget b = light();
  CHECK(psi_theta_N(0.0, {8.0, 0.5, 2}, b).value == 0.0);
  const PsiValue big = psi_theta_N(10.0, {8.0, 0.5, 2}, b);
  CHECK(big.value == big.sublinear_branch);
  CHECK(big.sublinear_branch < big.linear_branch);
  const PsiValue small = psi_theta_N(1e-4, {8.0, 0.5, 2}, b);
  CHECK(small.value == small.linear_branch);
}

TEST_CASE("psi below phi_eps at eps = 1e-6, k = 3") {
  const SolverBudget b = light();
  const EpsSchedule s = make_schedule(1e-6);
  const double pe = phi_eps_N(1.0, s, {4.0, 0.25, 3}, b).value;
  const double ps = psi_theta_N(1.0, {4.0, 0.25, 3}, b).value;
  CHECK(ps <= pe + 2e-3);
}

TEST_CASE("tightening c_eps approaches the clamped value") {
  const SolverBudget b = light();
  const double loose = phi_first_bound(1.0, 2, 0.5, kUnbounded, b).value;
  const double tight = phi_first_bound(1.0, 2, 1e-6, kUnbounded, b).value;
  const double clamped = phi_first_bound(1.0, 2, 0.0, kUnbounded, b).value;
  CHECK(loose < tight);
  CHECK(tight == doctest::Approx(clamped).epsilon(1e-4));
}

TEST_CASE("shrinking T forces divergence") {
  const SolverBudget b = light();
  const double e8 = fixed_length_minimum(1.0, 1.0 / 8.0, {1.0, 0.5, 2}, b).derivative_energy;
  const double e64 = fixed_length_minimum(1.0, 1.0 / 64.0, {1.0, 0.5, 2}, b).derivative_energy;
  CHECK(e64 >= 10.0 * e8);
}

}
