#include "gammaflow/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gammaflow/error.hpp"
#include "gammaflow/parallel.hpp"

namespace gammaflow {

NodeEnergy::NodeEnergy(LocalEnergy e, Grid1D grid) : local_(std::move(e)), grid_(grid) {
  if (grid_.n <= static_cast<std::size_t>(local_.order)) throw DomainError("grid has too few nodes for the difference order");
}

void NodeEnergy::set_fidelity(double lambda, std::vector<double> data) {
  if (!(lambda >= 0.0)) throw DomainError("fidelity weight must be non-negative");
  if (data.size() != grid_.n) throw DomainError("fidelity data has the wrong size");
  lambda_ = lambda;
  data_ = std::move(data);
}

double NodeEnergy::evaluate(std::span<const double> x, std::span<double> grad) const {
  const double h = grid_.h();
  double value;
  if (grad.empty()) {
    value = kernels::evaluate(local_, x, h).total();
  } else {
    value = kernels::evaluate(local_, x, h, grad).total();
  }
  if (lambda_ > 0.0) {
    value += lambda_ * h * parallel::blocked_sum(0, static_cast<std::ptrdiff_t>(x.size()), [&](std::ptrdiff_t i) {
               const double r = x[i] - data_[i];
               return r * r;
             });
    if (!grad.empty()) {
      for (std::size_t i = 0; i < x.size(); ++i) grad[i] += 2.0 * lambda_ * h * (x[i] - data_[i]);
    }
  }
  return value;
}

bool NodeEnergy::metric_is_constant() const {
  if (const auto* g = std::get_if<LogDensity>(&local_.density)) return g->scale == 0.0 || g->inner == 0.0;
  return std::get<TruncatedQuadraticDensity>(local_.density).coeff == 0.0;
}

std::optional<Metric> NodeEnergy::metric(std::span<const double> x) const {
  if (!use_metric_) return std::nullopt;
  const std::size_t n = grid_.n;
  const int k = local_.order;
  const double h = grid_.h();
  Metric m{BandedSpd(n, static_cast<std::size_t>(std::max(k, 1))), {}};
  const std::size_t c_end = std::min(local_.cell_end, n - 1);
  for (std::size_t i = local_.cell_begin; i < c_end; ++i) {
    const double d = (x[i + 1] - x[i]) / h;
    double w;  // curvature of the density with respect to d^2
    if (const auto* g = std::get_if<LogDensity>(&local_.density)) {
      w = g->scale * g->inner / (1.0 + g->inner * d * d);
    } else {
      const auto& t = std::get<TruncatedQuadraticDensity>(local_.density);
      w = t.coeff * d * d < t.cap ? t.coeff : 0.0;
    }
    const double c = 2.0 * w / h;
    if (c == 0.0) continue;
    m.matrix.add(i, i, c);
    m.matrix.add(i + 1, i + 1, c);
    m.matrix.add(i + 1, i, -c);
  }
  if (local_.penalty != 0.0) {
    const auto st = difference_stencil(k);
    const double c = 2.0 * local_.penalty * std::pow(h, 1.0 - 2.0 * k);
    const std::size_t w_end = std::min(local_.window_end, n - static_cast<std::size_t>(k));
    for (std::size_t j = local_.window_begin; j < w_end; ++j)
      for (std::size_t a = 0; a < st.size(); ++a)
        for (std::size_t b = 0; b <= a; ++b) m.matrix.add(j + a, j + b, c * st[a] * st[b]);
  }
  if (lambda_ > 0.0) {
    for (std::size_t i = 0; i < n; ++i) m.matrix.add(i, i, 2.0 * lambda_ * h);
  }
  return m;
}

}  // namespace gammaflow
