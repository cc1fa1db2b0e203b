#pragma once

#include <cstddef>
#include <optional>

#include "gammaflow/grid.hpp"
#include "gammaflow/profile.hpp"
#include "gammaflow/sbv.hpp"
#include "gammaflow/schedule.hpp"

namespace gammaflow {

/// Drops jumps with |z| <= n_min_jump (later values shift so u stays
/// continuous there), then opens a flat interval on each side of every
/// remaining jump and rescales the stretched domain back to [0, 1], so each
/// plateau has radius eta. Inputs that already comply are returned as is.
SbvSignal flatten(const SbvSignal& u, double eta, double n_min_jump);

struct RecoveryOptions {
  std::size_t window_nodes = 20001;
  double bulk_nodes_per_unit = 10000.0;
  std::size_t min_bulk_nodes = 64;
  /// Length of the transition on the stretched scale; defaults to T_star.
  std::optional<double> profile_length;
  /// Jumps are stretched as |jump_scale * z|^{1/k} (kappa for weighted runs).
  double jump_scale = 1.0;
};

/// Width eps |jump_scale z|^{1/k} T of the transition placed at t.
double window_width(double eps, double z, const OptimalProfile& prof, const RecoveryOptions& opt = {});

/// Samples u off the transition windows and u(t-) + z v((x - t)/W) on
/// (t, t + W). Throws DomainError unless W <= eta for every jump and u is
/// flat on every plateau.
CompositeSignal build_recovery(const SbvSignal& u, const EpsSchedule& s, const OptimalProfile& prof,
                               const RecoveryOptions& opt = {});

/// Same construction for piecewise-constant u; throws DomainError otherwise.
CompositeSignal build_recovery_surface(const SbvSignal& u, double eps, const OptimalProfile& prof,
                                       const RecoveryOptions& opt = {});

/// L1 distance between a recovery signal and u (cell midpoint rule).
double l1_distance(const CompositeSignal& r, const SbvSignal& u);

}  // namespace gammaflow
