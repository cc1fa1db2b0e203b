#pragma once

#include <vector>

#include "gammaflow/profile.hpp"

namespace gammaflow {

/// u(x) = sum_i coeffs[i] (x - x0)^i on [x0, x1].
struct PolySegment {
  double x0 = 0.0;
  double x1 = 1.0;
  std::vector<double> coeffs;

  double value(double x) const;
  double slope(double x) const;
  bool is_constant() const;
  /// int_{x0}^{x1} |u'|^2, exact up to rounding.
  double dirichlet() const;
};

struct Jump {
  double t;
  double z;    ///< u(t+) - u(t-)
  double eta;  ///< plateau radius; u is constant on (t - eta, t + eta)
};

/// Piecewise-polynomial function on [0, 1] with finitely many jumps.
///
/// Segments tile [0, 1] in order and describe u itself. Every break between
/// segments is either a point of continuity or one of the listed jumps, and
/// the jump sizes must match the segment values there.
class SbvSignal {
 public:
  SbvSignal() = default;
  /// Validates; throws DomainError on any violated invariant.
  SbvSignal(std::vector<PolySegment> segments, std::vector<Jump> jumps);

  const std::vector<PolySegment>& segments() const { return segments_; }
  const std::vector<Jump>& jumps() const { return jumps_; }

  /// Right-continuous evaluation.
  double value(double x) const;
  double left_limit(double x) const;
  bool piecewise_constant() const;
  /// True when u is constant on (t - eta, t + eta) for each jump and the
  /// plateaus are disjoint and inside (0, 1).
  bool plateaus_valid() const;

  double dirichlet() const;
  double jump_sum(int k) const;  ///< sum |z|^{1/k}

 private:
  std::vector<PolySegment> segments_;
  std::vector<Jump> jumps_;
};

/// Dirichlet part plus m_k sum |z|^{1/k}.
double limit_energy(const SbvSignal& u, int k);

/// alpha kappa^2 Dirichlet + alpha^{1 - 1/(2k)} m_k sum |z|^{1/k}.
double weighted_limit_energy(const SbvSignal& u, int k, const ScalingParams& p);

/// m_k sum |z|^{1/k}; throws DomainError "nonzero absolutely continuous
/// derivative" unless u is piecewise constant.
double surface_limit_energy(const SbvSignal& u, int k);

// Convenience builders.
SbvSignal step_signal(double t, double z, double eta, double base = 0.0);
SbvSignal affine_signal(double a, double b);
/// Piecewise-constant signal with the given jumps, starting from base.
SbvSignal staircase_signal(const std::vector<Jump>& jumps, double base = 0.0);

}  // namespace gammaflow
