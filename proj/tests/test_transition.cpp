#include <cmath>

#include "doctest.h"

#include "gammaflow/error.hpp"
#include "gammaflow/profile.hpp"
#include "gammaflow/transition.hpp"

using namespace gammaflow;

TEST_SUITE("transition") {

TEST_CASE("node counts") {
  CHECK(nodes_for_length(2.0, 100.0, 50) == 201);
  CHECK(nodes_for_length(0.1, 100.0, 50) == 51);
}

TEST_CASE("clamped problems reproduce c_k T^{1-2k}") {
  for (int k = 1; k <= 4; ++k) {
    const double T = m_const(k).T_star;
    const std::size_t n = nodes_for_length(T, 4001.0, 200);
    const TransitionSolution s = solve_transition(ProfileProblem::clamped(k, T), n);
    CHECK(s.converged);
    const double exact = transition_energy(k, T);
    CHECK(std::abs(s.derivative_energy - exact) / exact <= 1e-3 * (k == 1 ? 1e-6 : 1.0));
    CHECK(s.total == doctest::Approx(T + s.derivative_energy));
    CHECK(s.v.front() == 0.0);
    CHECK(s.v.back() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("discrete energy approaches c_k from one side under refinement") {
  const double T = 1.0;
  const double e1 = solve_transition(ProfileProblem::clamped(2, T), 501).derivative_energy;
  const double e2 = solve_transition(ProfileProblem::clamped(2, T), 2001).derivative_energy;
  CHECK(std::abs(e2 - 12.0) < std::abs(e1 - 12.0));
}

TEST_CASE("node-value route agrees with derivative coordinates") {
  const double T = 2.0;
  const std::size_t n = nodes_for_length(T, 1001.0, 200);
  const TransitionSolution a = solve_transition(ProfileProblem::clamped(2, T, 0.5), n);
  const TransitionSolution b = solve_transition_nodes(ProfileProblem::clamped(2, T, 0.5), n);
  CHECK(a.derivative_energy == doctest::Approx(b.derivative_energy).epsilon(1e-8));
  for (std::size_t i = 0; i < n; i += 97) CHECK(a.v[i] == doctest::Approx(b.v[i]).epsilon(1e-7));
}

TEST_CASE("bounded ends relax the clamped problem") {
  const double T = 1.5;
  const std::size_t n = nodes_for_length(T, 2001.0, 200);
  const double clamped = solve_transition(ProfileProblem::clamped(3, T), n).derivative_energy;
  const double loose = solve_transition(ProfileProblem::bounded(3, T, 1.0, 0.5, 2), n).derivative_energy;
  const double looser = solve_transition(ProfileProblem::bounded(3, T, 1.0, 1.0, 2), n).derivative_energy;
  CHECK(loose < clamped);
  CHECK(looser <= loose + 1e-9);
}

TEST_CASE("evenness in z") {
  const std::size_t n = nodes_for_length(1.0, 1001.0, 200);
  const double a = solve_transition(ProfileProblem::bounded(2, 1.0, 1.0, 0.25, 1), n).derivative_energy;
  const double b = solve_transition(ProfileProblem::bounded(2, 1.0, -1.0, 0.25, 1), n).derivative_energy;
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
}

}
