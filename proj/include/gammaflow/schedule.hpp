#pragma once

namespace gammaflow {

/// The eps-dependent scalings: threshold exponent p and c = eps^p.
///
/// The gradient threshold separating bulk behaviour from incipient jumps is
/// c/eps. Construct through make_schedule; the fields are kept consistent.
struct EpsSchedule {
  double eps;
  double p_eps;
  double c_eps;

  double log_abs() const;        // |log eps|
  double log_log_abs() const;    // log|log eps|
  double threshold() const { return c_eps / eps; }
  /// p < 1/2, the regime in which eps^{1-2p} -> 0.
  bool subcritical() const { return p_eps < 0.5; }
};

/// Largest admissible eps, e^{-e}; below it log|log eps| >= 1.
double max_admissible_eps();

/// sqrt(log|log eps| / |log eps|).
double canonical_exponent(double eps);

/// Canonical schedule. Throws DomainError unless 0 < eps <= e^{-e}.
EpsSchedule make_schedule(double eps);

/// Schedule with an explicit exponent p in (0, 1).
EpsSchedule make_schedule(double eps, double p_override);

struct MnRatios {
  double r_a;  ///< c |log eps|, tends to 0
  double r_b;  ///< log(1 + eps|log eps| c^2/eps^2) / |log eps|, tends to 1
};

MnRatios mn_lemma_ratios(const EpsSchedule& s);

/// Left side of the pointwise bound: log(1 + eps|log eps| z^2)/(eps|log eps|).
double log_density(const EpsSchedule& s, double z);

/// Truncated quadratic min{eps^{1-2p} z^2, 1/eps}.
double truncated_quadratic(const EpsSchedule& s, double z);

/// True iff log_density(z) >= (1 - eta) * min{eps^{1-2p} z^2, 1/eps}.
bool sub_prop_holds(const EpsSchedule& s, double eta, double z);

/// Same comparison against max{eps^{1-2p} z^2, 1/eps}, as literally printed.
bool sub_prop_holds_max_form(const EpsSchedule& s, double eta, double z);

}  // namespace gammaflow
