#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "gammaflow/schedule.hpp"
#include "gammaflow/transition.hpp"

namespace gammaflow {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// N may be +infinity: derivative bounds 1/N then become 0 (clamped ends).
struct DensityParams {
  double N = 1.0;
  double theta = 0.5;
  int k = 2;
};

struct SolverBudget {
  double nodes_per_unit = 2001.0;
  std::size_t min_intervals = 200;
  double T_min = 1e-2;
  double T_max = 1e2;
  int grid_points = 49;
  int refinements = 2;
  MinimizeOptions options{};
};

struct DensityValue {
  double value = 0.0;  ///< best T + int |v^{(k)}|^2
  double T = 0.0;      ///< length attaining it
  bool converged = true;
  int solves = 0;
};

/// max{l in N : 2l < k + 1}; throws DomainError for k < 2.
int ell_of_k(int k);

/// Minimizes T + energy over T for the problems make(T): geometric grid,
/// then refinement rounds around the best point at 5x finer ratio.
template <class Make>
DensityValue search_length(const Make& make, const SolverBudget& b);

/// Bounds 1/N on orders 1..k-1 at both ends.
DensityValue phi_N(double z, const DensityParams& d, const SolverBudget& b = {});

/// z = 1, bounds 1/N on orders 1..ell(k) only. Cached per (k, N, budget grid).
DensityValue m_of_N(const DensityParams& d, const SolverBudget& b = {});

struct PsiValue {
  double value;
  double linear_branch;     ///< m(N) theta^{1/k - 1} |z|
  double sublinear_branch;  ///< m(theta N) |z|^{1/k}
  bool converged;
};

/// min{m(N) theta^{1/k-1} |z|, m(theta N) |z|^{1/k}}, m(theta N) taken with
/// the real bound 1/(theta N).
PsiValue psi_theta_N(double z, const DensityParams& d, const SolverBudget& b = {});

/// First-derivative bound c_eps, bounds 1/N on orders 2..ell(k).
DensityValue phi_eps_N(double z, const EpsSchedule& s, const DensityParams& d, const SolverBudget& b = {});
/// Same template with an explicit first-derivative bound (0 clamps).
DensityValue phi_first_bound(double z, int k, double first_bound, double N, const SolverBudget& b = {});

/// Minimal int_0^T |v^{(k)}|^2 at fixed T with the phi_N constraints.
TransitionSolution fixed_length_minimum(double z, double T, const DensityParams& d, const SolverBudget& b = {});

void clear_density_cache();

}  // namespace gammaflow

#include "gammaflow/densities_impl.hpp"
