#include "gammaflow/energy.hpp"

#include <algorithm>
#include <cmath>

#include "gammaflow/error.hpp"

namespace gammaflow {

namespace {

void check_order(int k) {
  if (k < 1 || k > kMaxOrder) throw DomainError("k must lie in 1..12");
}

void check_eps_unit(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
}

double penalty_weight(double eps, int k) { return std::pow(eps, 2.0 * k - 1.0); }

}  // namespace

LocalEnergy perona_malik_density(const EpsSchedule& s, int k) {
  check_order(k);
  const double eL = s.eps * s.log_abs();
  return LocalEnergy{LogDensity{1.0 / eL, eL}, k, penalty_weight(s.eps, k)};
}

LocalEnergy truncated_quadratic_density(double eps, int k) {
  check_order(k);
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  return LocalEnergy{TruncatedQuadraticDensity{1.0, 1.0 / eps}, k, penalty_weight(eps, k)};
}

LocalEnergy threshold_lower_bound_density(const EpsSchedule& s, int k) {
  check_order(k);
  return LocalEnergy{TruncatedQuadraticDensity{std::pow(s.eps, 1.0 - 2.0 * s.p_eps), 1.0 / s.eps}, k,
                     penalty_weight(s.eps, k)};
}

LocalEnergy surface_scaled_density(double eps, int k) {
  check_order(k);
  check_eps_unit(eps);
  return LocalEnergy{LogDensity{1.0 / (2.0 * eps * -std::log(eps)), 1.0}, k, penalty_weight(eps, k)};
}

LocalEnergy weighted_perona_malik_density(const EpsSchedule& s, int k, const ScalingParams& p, double c) {
  check_order(k);
  if (!(p.alpha > 0.0) || !(p.kappa > 0.0) || !(c > 0.0)) throw DomainError("alpha, kappa, c must be positive");
  const double eL = s.eps * s.log_abs();
  return LocalEnergy{LogDensity{p.alpha / eL, c * p.kappa * p.kappa * eL}, k, penalty_weight(s.eps, k)};
}

LocalEnergy restrict_to(LocalEnergy e, const Grid1D& g, Interval sub) {
  if (!(sub.a < sub.b)) throw DomainError("empty sub-interval");
  const double h = g.h();
  // Index-space endpoints with a small slack so that nodes sitting on the
  // interval ends count as inside.
  const double lo = std::ceil((sub.a - g.origin) / h - 1e-9);
  const double hi = std::floor((sub.b - g.origin) / h + 1e-9);
  const double last = static_cast<double>(g.n - 1);
  const double first_node = std::max(lo, 0.0);
  const double last_node = std::min(hi, last);
  if (last_node <= first_node) {
    e.cell_begin = e.cell_end = e.window_begin = e.window_end = 0;
    return e;
  }
  const auto a = static_cast<std::size_t>(first_node);
  const auto b = static_cast<std::size_t>(last_node);
  e.cell_begin = a;
  e.cell_end = b;  // cells a..b-1 end at node <= b
  e.window_begin = a;
  const auto k = static_cast<std::size_t>(e.order);
  e.window_end = b >= a + k ? b - k + 1 : a;
  return e;
}

EnergyParts evaluate(const LocalEnergy& e, const Signal& u) {
  return kernels::evaluate(e, u.values, u.grid.h());
}

EnergyParts evaluate(const LocalEnergy& e, const Signal& u, std::vector<double>& grad) {
  grad.assign(u.size(), 0.0);
  return kernels::evaluate(e, u.values, u.grid.h(), grad);
}

EnergyParts evaluate(const LocalEnergy& e, const CompositeSignal& u) {
  EnergyParts total;
  for (const auto& piece : u.pieces) {
    const EnergyParts p = evaluate(e, piece);
    total.bulk += p.bulk;
    total.penalty += p.penalty;
  }
  return total;
}

std::vector<double> d1(const Signal& u) {
  std::vector<double> out(u.size() - 1);
  kernels::first_differences(u.values, u.grid.h(), out);
  return out;
}

std::vector<double> dk(const Signal& u, int k) {
  if (k < 1) throw DomainError("difference order must be >= 1");
  if (u.size() <= static_cast<std::size_t>(k)) throw DomainError("grid has too few nodes for the difference order");
  std::vector<double> out(u.size() - static_cast<std::size_t>(k));
  kernels::kth_differences(u.values, u.grid.h(), k, out);
  return out;
}

double perona_malik_energy(const Signal& u, const EpsSchedule& s, int k) {
  return evaluate(perona_malik_density(s, k), u).total();
}
double perona_malik_energy(const CompositeSignal& u, const EpsSchedule& s, int k) {
  return evaluate(perona_malik_density(s, k), u).total();
}
double truncated_quadratic_energy(const Signal& u, double eps, int k) {
  return evaluate(truncated_quadratic_density(eps, k), u).total();
}
double threshold_lower_bound_energy(const Signal& u, const EpsSchedule& s, int k, Interval sub) {
  return evaluate(restrict_to(threshold_lower_bound_density(s, k), u.grid, sub), u).total();
}
double surface_scaled_energy(const Signal& u, double eps, int k) {
  return evaluate(surface_scaled_density(eps, k), u).total();
}
double surface_scaled_energy(const CompositeSignal& u, double eps, int k) {
  return evaluate(surface_scaled_density(eps, k), u).total();
}
double weighted_perona_malik_energy(const Signal& u, const EpsSchedule& s, int k, const ScalingParams& p, double c) {
  return evaluate(weighted_perona_malik_density(s, k, p, c), u).total();
}
double weighted_perona_malik_energy(const CompositeSignal& u, const EpsSchedule& s, int k, const ScalingParams& p,
                                    double c) {
  return evaluate(weighted_perona_malik_density(s, k, p, c), u).total();
}

}  // namespace gammaflow
