#include "gammaflow/densities.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "gammaflow/profile.hpp"

namespace gammaflow {

int ell_of_k(int k) {
  if (k < 2) throw DomainError("ell(k) needs k >= 2");
  int best = 0;
  for (int l = 0; 2 * l < k + 1; ++l) best = l;
  return best;
}

namespace {

double inverse_bound(double N) {
  if (std::isinf(N)) return 0.0;
  if (!(N > 0.0)) throw DomainError("N must be positive");
  return 1.0 / N;
}

void check_params(const DensityParams& d) {
  if (d.k < 1 || d.k > kMaxOrder) throw DomainError("k must lie in 1..12");
  if (!(d.N >= 1.0)) throw DomainError("N must be at least 1");
}

void check_jump(double z) {
  if (z == 0.0 || !std::isfinite(z)) throw DomainError("jump must be nonzero and finite");
}

using CacheKey = std::tuple<int, double, double, std::size_t, double, double, int, int, double>;

std::mutex& cache_mutex() {
  static std::mutex mu;
  return mu;
}

std::map<CacheKey, DensityValue>& cache() {
  static std::map<CacheKey, DensityValue> c;
  return c;
}

// m(.) at an explicit real bound on orders 1..ell(k).
DensityValue m_at_bound(int k, double bound, const SolverBudget& b) {
  const CacheKey key{k,          bound,   b.nodes_per_unit, b.min_intervals, b.T_min,
                     b.T_max,    b.grid_points, b.refinements, b.options.tol};
  {
    std::lock_guard<std::mutex> lock(cache_mutex());
    const auto it = cache().find(key);
    if (it != cache().end()) return it->second;
  }
  const int last = ell_of_k(k);
  const DensityValue v =
      search_length([&](double T) { return ProfileProblem::bounded(k, T, 1.0, bound, last); }, b);
  std::lock_guard<std::mutex> lock(cache_mutex());
  cache().emplace(key, v);
  return v;
}

}  // namespace

void clear_density_cache() {
  std::lock_guard<std::mutex> lock(cache_mutex());
  cache().clear();
}

DensityValue phi_N(double z, const DensityParams& d, const SolverBudget& b) {
  check_params(d);
  check_jump(z);
  const double bound = inverse_bound(d.N);
  return search_length([&](double T) { return ProfileProblem::bounded(d.k, T, z, bound, d.k - 1); }, b);
}

DensityValue m_of_N(const DensityParams& d, const SolverBudget& b) {
  check_params(d);
  return m_at_bound(d.k, inverse_bound(d.N), b);
}

PsiValue psi_theta_N(double z, const DensityParams& d, const SolverBudget& b) {
  check_params(d);
  if (!(d.theta > 0.0 && d.theta < 1.0)) throw DomainError("theta must lie in (0, 1)");
  if (!(d.theta * d.N >= 1.0)) throw DomainError("theta N must be at least 1");
  if (!std::isfinite(z)) throw DomainError("jump must be finite");
  const DensityValue mn = m_at_bound(d.k, inverse_bound(d.N), b);
  const DensityValue mtn = m_at_bound(d.k, inverse_bound(d.theta * d.N), b);
  const double az = std::abs(z);
  PsiValue out{};
  out.linear_branch = mn.value * std::pow(d.theta, 1.0 / d.k - 1.0) * az;
  out.sublinear_branch = mtn.value * std::pow(az, 1.0 / d.k);
  out.value = std::min(out.linear_branch, out.sublinear_branch);
  out.converged = mn.converged && mtn.converged;
  return out;
}

DensityValue phi_first_bound(double z, int k, double first_bound, double N, const SolverBudget& b) {
  check_jump(z);
  if (k < 2) throw DomainError("k must be at least 2");
  if (!(first_bound >= 0.0)) throw DomainError("first-derivative bound must be non-negative");
  const double higher = inverse_bound(N);
  const int last = ell_of_k(k);
  return search_length(
      [&](double T) {
        ProfileProblem p = ProfileProblem::bounded(k, T, z, higher, last);
        p.left[0] = first_bound;
        p.right[0] = first_bound;
        return p;
      },
      b);
}

DensityValue phi_eps_N(double z, const EpsSchedule& s, const DensityParams& d, const SolverBudget& b) {
  check_params(d);
  return phi_first_bound(z, d.k, s.c_eps, d.N, b);
}

TransitionSolution fixed_length_minimum(double z, double T, const DensityParams& d, const SolverBudget& b) {
  check_params(d);
  check_jump(z);
  const ProfileProblem p = ProfileProblem::bounded(d.k, T, z, inverse_bound(d.N), d.k - 1);
  return solve_transition(p, nodes_for_length(T, b.nodes_per_unit, b.min_intervals), b.options);
}

}  // namespace gammaflow
