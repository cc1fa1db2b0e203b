#pragma once

#include <vector>

#include "gammaflow/energy.hpp"
#include "gammaflow/optim.hpp"

namespace gammaflow {

/// A local energy on node values of one uniform grid, optionally plus the
/// fidelity term lambda h sum (u - data)^2.
///
/// The metric is the Hessian of the quadratic majorizer at the current
/// iterate: density curvature frozen per cell (log and truncated-quadratic
/// densities are concave in d^2), exact penalty and fidelity Hessians.
class NodeEnergy : public DiscreteEnergy {
 public:
  NodeEnergy(LocalEnergy e, Grid1D grid);

  void set_fidelity(double lambda, std::vector<double> data);
  /// Disables the metric; the minimizer then uses Barzilai-Borwein steps.
  void set_use_metric(bool on) { use_metric_ = on; }

  std::size_t size() const override { return grid_.n; }
  double evaluate(std::span<const double> x, std::span<double> grad) const override;
  std::optional<Metric> metric(std::span<const double> x) const override;
  bool metric_is_constant() const override;

  const LocalEnergy& local() const { return local_; }
  const Grid1D& grid() const { return grid_; }

 private:
  LocalEnergy local_;
  Grid1D grid_;
  double lambda_ = 0.0;
  std::vector<double> data_;
  bool use_metric_ = true;
};

}  // namespace gammaflow
