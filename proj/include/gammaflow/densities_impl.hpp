#pragma once

#include <cmath>
#include <exception>
#include <vector>

#include "gammaflow/error.hpp"

namespace gammaflow {

namespace detail {

struct LengthPoint {
  double T;
  double value;
  bool converged;
  bool failed;
};

template <class Make>
std::vector<LengthPoint> solve_lengths(const Make& make, const std::vector<double>& Ts, const SolverBudget& b) {
  std::vector<LengthPoint> pts(Ts.size());
  const auto count = static_cast<std::ptrdiff_t>(Ts.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const double T = Ts[static_cast<std::size_t>(i)];
    LengthPoint p{T, 0.0, false, true};
    try {
      const auto sol =
          solve_transition(make(T), nodes_for_length(T, b.nodes_per_unit, b.min_intervals), b.options);
      p = {T, sol.total, sol.converged, false};
    } catch (const std::exception&) {
      // Recorded as a failed point; the search continues with the others.
    }
    pts[static_cast<std::size_t>(i)] = p;
  }
  return pts;
}

}  // namespace detail

template <class Make>
DensityValue search_length(const Make& make, const SolverBudget& b) {
  if (!(b.T_min > 0.0) || !(b.T_max > b.T_min) || b.grid_points < 2) throw DomainError("bad length grid");
  const double ratio = std::pow(b.T_max / b.T_min, 1.0 / (b.grid_points - 1));
  std::vector<double> Ts;
  for (int i = 0; i < b.grid_points; ++i) Ts.push_back(b.T_min * std::pow(ratio, i));

  DensityValue best;
  best.value = INFINITY;
  bool any = false;
  auto absorb = [&](const std::vector<detail::LengthPoint>& pts) {
    for (const auto& p : pts) {
      ++best.solves;
      if (p.failed) continue;
      any = true;
      if (p.value < best.value) {
        best.value = p.value;
        best.T = p.T;
        best.converged = p.converged;
      }
    }
  };
  absorb(detail::solve_lengths(make, Ts, b));
  double step = ratio;
  for (int round = 0; round < b.refinements && any; ++round) {
    const double fine = std::pow(step, 1.0 / 5.0);
    std::vector<double> local;
    for (int j = -5; j <= 5; ++j)
      if (j != 0) local.push_back(best.T * std::pow(fine, j));
    absorb(detail::solve_lengths(make, local, b));
    step = fine;
  }
  if (!any) throw InternalError("every length in the search failed");
  return best;
}

}  // namespace gammaflow
