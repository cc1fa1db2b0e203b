#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace gammaflow {

/// Uniform grid of n nodes on [origin, origin + length]. The length is kept
/// separately from the endpoints so that very short pieces (transition
/// windows of width ~1e-12 placed near x = 0.5) keep full relative precision
/// in h.
struct Grid1D {
  std::size_t n = 2;
  double origin = 0.0;
  double length = 1.0;

  static Grid1D unit(std::size_t n) { return Grid1D{n, 0.0, 1.0}; }

  double h() const { return length / static_cast<double>(n - 1); }
  double x(std::size_t i) const { return origin + length * (static_cast<double>(i) / static_cast<double>(n - 1)); }
  double end() const { return origin + length; }
};

struct Signal {
  Grid1D grid;
  std::vector<double> values;

  Signal() = default;
  Signal(Grid1D g, std::vector<double> v);
  /// Samples f at the grid nodes.
  static Signal sample(Grid1D g, const std::function<double(double)>& f);

  std::size_t size() const { return values.size(); }
  /// Piecewise-linear interpolation; clamps outside the grid.
  double interpolate(double x) const;
};

/// Consecutive uniform pieces covering an interval. Energies are additive
/// over pieces; builders glue pieces only where the signal is locally
/// constant, so no difference stencil is lost at a junction.
struct CompositeSignal {
  std::vector<Signal> pieces;

  std::size_t total_nodes() const;
  double begin() const { return pieces.front().grid.origin; }
  double end() const { return pieces.back().grid.end(); }
  double interpolate(double x) const;
  /// Resamples onto a uniform unit-interval grid of n nodes.
  Signal to_uniform(std::size_t n) const;
};

}  // namespace gammaflow
