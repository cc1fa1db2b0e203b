#include "gammaflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gammaflow/error.hpp"

namespace gammaflow {

Signal::Signal(Grid1D g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (grid.n < 2) throw DomainError("a grid needs at least 2 nodes");
  if (!(grid.length > 0.0)) throw DomainError("grid length must be positive");
  if (values.size() != grid.n) throw DomainError("signal length does not match its grid");
}

Signal Signal::sample(Grid1D g, const std::function<double(double)>& f) {
  std::vector<double> v(g.n);
  for (std::size_t i = 0; i < g.n; ++i) v[i] = f(g.x(i));
  return Signal(g, std::move(v));
}

double Signal::interpolate(double x) const {
  const double s = (x - grid.origin) / grid.length * static_cast<double>(grid.n - 1);
  if (s <= 0.0) return values.front();
  if (s >= static_cast<double>(grid.n - 1)) return values.back();
  const auto i = static_cast<std::size_t>(std::floor(s));
  const double f = s - static_cast<double>(i);
  if (i + 1 >= grid.n) return values.back();
  return values[i] + f * (values[i + 1] - values[i]);
}

std::size_t CompositeSignal::total_nodes() const {
  std::size_t n = 0;
  for (const auto& p : pieces) n += p.size();
  return n;
}

double CompositeSignal::interpolate(double x) const {
  for (const auto& p : pieces) {
    if (x <= p.grid.end()) return p.interpolate(x);
  }
  return pieces.back().values.back();
}

Signal CompositeSignal::to_uniform(std::size_t n) const {
  return Signal::sample(Grid1D::unit(n), [this](double x) { return interpolate(x); });
}

}  // namespace gammaflow
