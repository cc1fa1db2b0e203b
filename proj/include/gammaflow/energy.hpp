#pragma once

#include <vector>

#include "gammaflow/grid.hpp"
#include "gammaflow/kernels.hpp"
#include "gammaflow/profile.hpp"
#include "gammaflow/schedule.hpp"

namespace gammaflow {

struct Interval {
  double a;
  double b;
};

// Local energies of the discretized functionals. Each combines a
// first-difference density with the penalty eps^{2k-1} h sum (dk)^2.

/// (1/(eps L)) log(1 + eps L d^2), L = |log eps|.
LocalEnergy perona_malik_density(const EpsSchedule& s, int k);
/// min(d^2, 1/eps).
LocalEnergy truncated_quadratic_density(double eps, int k);
/// min(eps^{1-2p} d^2, 1/eps).
LocalEnergy threshold_lower_bound_density(const EpsSchedule& s, int k);
/// (1/(2 eps L)) log(1 + d^2).
LocalEnergy surface_scaled_density(double eps, int k);
/// (alpha/(eps L)) log(1 + c kappa^2 eps L d^2).
LocalEnergy weighted_perona_malik_density(const EpsSchedule& s, int k, const ScalingParams& p, double c = 1.0);

/// Restricts e to the cells and windows of g lying inside sub.
LocalEnergy restrict_to(LocalEnergy e, const Grid1D& g, Interval sub);

EnergyParts evaluate(const LocalEnergy& e, const Signal& u);
EnergyParts evaluate(const LocalEnergy& e, const Signal& u, std::vector<double>& grad);
EnergyParts evaluate(const LocalEnergy& e, const CompositeSignal& u);

std::vector<double> d1(const Signal& u);
/// Throws DomainError when the grid has k or fewer nodes.
std::vector<double> dk(const Signal& u, int k);

double perona_malik_energy(const Signal& u, const EpsSchedule& s, int k);
double perona_malik_energy(const CompositeSignal& u, const EpsSchedule& s, int k);
double truncated_quadratic_energy(const Signal& u, double eps, int k);
double threshold_lower_bound_energy(const Signal& u, const EpsSchedule& s, int k, Interval sub = {0.0, 1.0});
double surface_scaled_energy(const Signal& u, double eps, int k);
double surface_scaled_energy(const CompositeSignal& u, double eps, int k);
double weighted_perona_malik_energy(const Signal& u, const EpsSchedule& s, int k, const ScalingParams& p,
                                    double c = 1.0);
double weighted_perona_malik_energy(const CompositeSignal& u, const EpsSchedule& s, int k,
                                    const ScalingParams& p, double c = 1.0);

}  // namespace gammaflow
