#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <variant>
#include <vector>

namespace gammaflow {

/// scale * log(1 + inner * d^2)
struct LogDensity {
  double scale;
  double inner;
};

/// min(coeff * d^2, cap)
struct TruncatedQuadraticDensity {
  double coeff;
  double cap;
};

using CellDensity = std::variant<LogDensity, TruncatedQuadraticDensity>;

inline constexpr std::size_t kFullRange = std::numeric_limits<std::size_t>::max();

/// h * sum_cells f(d1) + penalty * h * sum_windows (dk)^2 on one uniform
/// piece. Cell i spans nodes i, i+1; window i spans nodes i..i+order.
/// Ranges are half-open and clipped to what the grid provides.
struct LocalEnergy {
  CellDensity density;
  int order = 1;
  double penalty = 0.0;
  std::size_t cell_begin = 0, cell_end = kFullRange;
  std::size_t window_begin = 0, window_end = kFullRange;
};

struct EnergyParts {
  double bulk = 0.0;     ///< first-derivative density term
  double penalty = 0.0;  ///< weighted k-th difference term
  double total() const { return bulk + penalty; }
};

/// Signed coefficients (-1)^{k-j} C(k, j), j = 0..k.
std::vector<double> difference_stencil(int k);

double density_value(const CellDensity& f, double d);
double density_slope(const CellDensity& f, double d);

/// OpenMP kernels. Reductions are blocked, so values do not depend on the
/// thread count.
namespace kernels {

void first_differences(std::span<const double> u, double h, std::span<double> out);
void kth_differences(std::span<const double> u, double h, int k, std::span<double> out);
EnergyParts evaluate(const LocalEnergy& e, std::span<const double> u, double h);
/// Overwrites grad (size n) with the gradient with respect to node values.
EnergyParts evaluate(const LocalEnergy& e, std::span<const double> u, double h, std::span<double> grad);

}  // namespace kernels

/// Plain serial loops, kept as the test oracle and benchmark baseline.
namespace reference {

std::vector<double> first_differences(std::span<const double> u, double h);
std::vector<double> kth_differences(std::span<const double> u, double h, int k);
EnergyParts evaluate(const LocalEnergy& e, std::span<const double> u, double h);
EnergyParts evaluate(const LocalEnergy& e, std::span<const double> u, double h, std::span<double> grad);

}  // namespace reference

}  // namespace gammaflow
