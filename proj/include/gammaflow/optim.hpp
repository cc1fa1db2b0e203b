#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gammaflow/banded.hpp"

namespace gammaflow {

/// Positive definite scaling for the projected-gradient step. Coordinates
/// listed in `flat` do not enter the energy (their gradient is zero) and are
/// moved only to keep constraints satisfied; `matrix` acts on the remaining
/// coordinates in increasing index order.
struct Metric {
  BandedSpd matrix;
  std::vector<std::size_t> flat;
};

/// Objective on a coordinate vector. Implementations must be pure.
class DiscreteEnergy {
 public:
  virtual ~DiscreteEnergy() = default;
  virtual std::size_t size() const = 0;
  /// Value; fills grad (same size) when it is non-empty.
  virtual double evaluate(std::span<const double> x, std::span<double> grad) const = 0;
  /// Optional scaling. Without one the minimizer uses Barzilai-Borwein steps.
  virtual std::optional<Metric> metric(std::span<const double> x) const {
    (void)x;
    return std::nullopt;
  }
  /// When false the metric is rebuilt at every iterate.
  virtual bool metric_is_constant() const { return true; }
};

/// Sparse linear functional sum coef * x[index].
struct LinearForm {
  std::vector<std::pair<std::size_t, double>> terms;
  double apply(std::span<const double> x) const;
};

struct EqualityConstraint {
  LinearForm form;
  double value;
};

/// lo <= form(x) <= hi.
struct BoundConstraint {
  LinearForm form;
  double lo;
  double hi;
};

struct Pin {
  std::size_t index;
  double value;
};

struct ConstraintSet {
  std::vector<Pin> pins;
  std::vector<EqualityConstraint> equalities;
  std::vector<BoundConstraint> bounds;

  /// |form(x)| <= max_abs; max_abs == 0 becomes an equality.
  void add_abs_bound(LinearForm form, double max_abs);
};

/// Forward (left end) or backward (right end) difference of the given order
/// at an end of a uniform node vector, divided by h^order.
LinearForm boundary_derivative_form(std::size_t n, double h, int order, bool right_end);

struct MinimizeOptions {
  double tol = 1e-8;  ///< on ||x - P(x - M^{-1} g)||_inf / max(1, ||x||_inf)
  int max_iter = 500;
  double armijo = 1e-4;
  int max_backtracks = 60;
};

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
  double stationarity = 0.0;
  std::vector<double> history;  ///< accepted objective values, non-increasing
};

/// Scaled projected gradient with Armijo backtracking along the projection
/// arc. Throws DomainError if init disagrees with a pin or a bound cannot be
/// satisfied; non-convergence is reported through the result.
MinimizeResult minimize(const DiscreteEnergy& e, const ConstraintSet& c, std::vector<double> init,
                        const MinimizeOptions& opt = {});

/// Projection onto the feasible set in the metric of e at x (Euclidean when
/// e has no metric). Exposed for tests.
std::vector<double> project_feasible(const DiscreteEnergy& e, const ConstraintSet& c, std::vector<double> x);

/// Max relative error between the gradient and central differences at 32
/// coordinates drawn with a fixed seed. Step h_fd (1 + |x_i|); errors are
/// relative to max(|analytic|, |numeric|, ||gradient||_inf).
double grad_check(const DiscreteEnergy& e, std::span<const double> x, double h_fd = 1e-6);

}  // namespace gammaflow
