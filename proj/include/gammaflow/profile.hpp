#pragma once

#include <gmpxx.h>

#include "gammaflow/rational_polynomial.hpp"

namespace gammaflow {

inline constexpr int kMaxOrder = 12;

/// Optimal transition on the unit interval, with the constants of the
/// length-plus-energy problem  min_T  T + c_k T^{1-2k}.
struct OptimalProfile {
  int k = 0;
  RationalPolynomial unit_poly;  ///< v(0)=0, v(1)=1, derivatives 1..k-1 vanish at 0 and 1
  mpq_class c_k;                 ///< int_0^1 |v^{(k)}|^2
  double T_star = 0.0;           ///< optimal length
  double m_k = 0.0;              ///< T_star + c_k T_star^{1-2k}

  double c_k_double() const { return c_k.get_d(); }
  /// Profile on [0, T] evaluated at t (clamped outside).
  double value_at(double t, double T) const;
};

struct ScalingParams {
  double alpha = 1.0;
  double kappa = 1.0;
};

/// Optimal length and value of  min_T  T + weight * c_k * T^{1-2k}.
struct WeightedOptimum {
  double T;
  double value;
};

/// Degree 2k-1 clamped interpolant from 0 to 1. Throws DomainError unless
/// 1 <= k <= 12.
RationalPolynomial hermite_profile(int k);

/// c_k, the energy int_0^1 |v^{(k)}|^2 of hermite_profile(k).
mpq_class derivative_energy_constant(int k);

/// Minimal value of int_0^T |v^{(k)}|^2 over clamped unit transitions, c_k T^{1-2k}.
double transition_energy(int k, double T);

/// Cached per k; safe to call concurrently.
const OptimalProfile& m_const(int k);

WeightedOptimum weighted_optimum(int k, double weight);

/// m_k kappa^{-1/k} alpha^{-1/(2k)}; cross-checked against weighted_optimum.
double m_scaled(int k, const ScalingParams& p);

/// Closed form (2k-1) ((2k-2)!/(k-1)!)^2, used as a cross-check on c_k.
mpz_class derivative_energy_closed_form(int k);

}  // namespace gammaflow
