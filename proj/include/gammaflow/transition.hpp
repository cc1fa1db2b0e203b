#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gammaflow/optim.hpp"

namespace gammaflow {

/// Boundary treatment of v^{(l)} at one end: nullopt leaves it free, 0
/// clamps it, b > 0 imposes |v^{(l)}| <= b.
using EndCondition = std::optional<double>;

/// Minimize weight * int_0^T |v^{(k)}|^2 over v with v(0) = 0, v(T) = z and
/// the given conditions on orders 1..k-1 at each end (index l - 1).
struct ProfileProblem {
  int k = 1;
  double T = 1.0;
  double z = 1.0;
  double weight = 1.0;
  std::vector<EndCondition> left;
  std::vector<EndCondition> right;

  static ProfileProblem clamped(int k, double T, double z = 1.0);
  /// Orders 1..last bounded by `bound` at both ends, higher orders free.
  static ProfileProblem bounded(int k, double T, double z, double bound, int last);
};

struct TransitionSolution {
  double derivative_energy = 0.0;  ///< weight h sum (dk)^2
  double total = 0.0;              ///< T + derivative_energy
  bool converged = false;
  int iterations = 0;
  double h = 0.0;
  std::vector<double> v;  ///< node values on [0, T]
};

/// max(ceil(per_unit * T), min_intervals) + 1.
std::size_t nodes_for_length(double T, double per_unit, std::size_t min_intervals);

/// Solves the problem on n nodes, with the unknowns taken as the scaled
/// forward differences a_l = Delta^l v_0 / h^l (l = 1..k-1) and the k-th
/// differences w_j = Delta^k v_j / h^k. Energy and constraints are the same
/// forward-difference discretization as on node values; this choice only
/// avoids forming k-th differences of nearly equal node values.
TransitionSolution solve_transition(const ProfileProblem& p, std::size_t n, const MinimizeOptions& opt = {});

/// Same discretization solved on node values; clamped problems only (the
/// penalty Hessian is singular on nodes otherwise). Independent oracle.
TransitionSolution solve_transition_nodes(const ProfileProblem& p, std::size_t n, const MinimizeOptions& opt = {});

}  // namespace gammaflow
