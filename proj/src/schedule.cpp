#include "gammaflow/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gammaflow/error.hpp"

namespace gammaflow {

double EpsSchedule::log_abs() const { return -std::log(eps); }
double EpsSchedule::log_log_abs() const { return std::log(-std::log(eps)); }

double max_admissible_eps() { return std::exp(-std::numbers::e); }

namespace {

void check_eps(double eps) {
  // One ulp of slack so that exp(-e) itself is accepted after round trips.
  if (!(eps > 0.0) || eps > max_admissible_eps() * (1.0 + 4e-16)) {
    throw DomainError("eps must lie in (0, e^-e], got " + std::to_string(eps));
  }
}

}  // namespace

double canonical_exponent(double eps) {
  check_eps(eps);
  const double L = -std::log(eps);
  return std::sqrt(std::log(L) / L);
}

EpsSchedule make_schedule(double eps) {
  return make_schedule(eps, canonical_exponent(eps));
}

EpsSchedule make_schedule(double eps, double p_override) {
  check_eps(eps);
  if (!(p_override > 0.0 && p_override < 1.0)) {
    throw DomainError("p_eps must lie in (0, 1)");
  }
  return EpsSchedule{eps, p_override, std::pow(eps, p_override)};
}

MnRatios mn_lemma_ratios(const EpsSchedule& s) {
  const double L = s.log_abs();
  const double ratio = s.c_eps / s.eps;
  // eps|log eps| (c/eps)^2 = |log eps| c^2 / eps
  const double r_b = std::log1p(L * s.c_eps * ratio) / L;
  return {s.c_eps * L, r_b};
}

double log_density(const EpsSchedule& s, double z) {
  const double eL = s.eps * s.log_abs();
  return std::log1p(eL * z * z) / eL;
}

double truncated_quadratic(const EpsSchedule& s, double z) {
  return std::min(std::pow(s.eps, 1.0 - 2.0 * s.p_eps) * z * z, 1.0 / s.eps);
}

bool sub_prop_holds(const EpsSchedule& s, double eta, double z) {
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0, 1)");
  return log_density(s, z) >= (1.0 - eta) * truncated_quadratic(s, z);
}

bool sub_prop_holds_max_form(const EpsSchedule& s, double eta, double z) {
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0, 1)");
  const double quad = std::pow(s.eps, 1.0 - 2.0 * s.p_eps) * z * z;
  return log_density(s, z) >= (1.0 - eta) * std::max(quad, 1.0 / s.eps);
}

}  // namespace gammaflow
