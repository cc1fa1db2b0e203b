#include "gammaflow/profile.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>

#include "gammaflow/error.hpp"

namespace gammaflow {

namespace {

void check_order(int k) {
  if (k < 1 || k > kMaxOrder) {
    throw DomainError("k must lie in 1.." + std::to_string(kMaxOrder) + ", got " + std::to_string(k));
  }
}

// falling factorial i (i-1) ... (i-r+1)
mpz_class falling(int i, int r) {
  mpz_class f = 1;
  for (int j = 0; j < r; ++j) f *= i - j;
  return f;
}

}  // namespace

RationalPolynomial hermite_profile(int k) {
  check_order(k);
  const int n = 2 * k;
  std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n, mpq_class(0)));
  std::vector<mpq_class> b(n, mpq_class(0));
  // Rows 0..k-1: v^{(l)}(0); rows k..2k-1: v^{(l)}(1).
  for (int l = 0; l < k; ++l) {
    a[l][l] = mpq_class(falling(l, l));
    for (int i = l; i < n; ++i) a[k + l][i] = mpq_class(falling(i, l));
  }
  b[k] = 1;
  return RationalPolynomial(solve_exact(std::move(a), std::move(b)));
}

mpq_class derivative_energy_constant(int k) {
  const RationalPolynomial dk = hermite_profile(k).derivative(k);
  return (dk * dk).integrate_unit();
}

mpz_class derivative_energy_closed_form(int k) {
  check_order(k);
  mpz_class ratio = 1;
  for (int j = k; j <= 2 * k - 2; ++j) ratio *= j;
  return (2 * k - 1) * ratio * ratio;
}

double transition_energy(int k, double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("T must be positive and finite");
  return m_const(k).c_k_double() * std::pow(T, 1.0 - 2.0 * k);
}

double OptimalProfile::value_at(double t, double T) const {
  if (t <= 0.0) return 0.0;
  if (t >= T) return 1.0;
  return unit_poly.eval(t / T);
}

const OptimalProfile& m_const(int k) {
  check_order(k);
  static std::array<std::unique_ptr<OptimalProfile>, kMaxOrder + 1> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[static_cast<std::size_t>(k)];
  if (!slot) {
    auto p = std::make_unique<OptimalProfile>();
    p->k = k;
    p->unit_poly = hermite_profile(k);
    const RationalPolynomial dk = p->unit_poly.derivative(k);
    p->c_k = (dk * dk).integrate_unit();
    const double two_k = 2.0 * k;
    p->T_star = std::pow((two_k - 1.0) * p->c_k.get_d(), 1.0 / two_k);
    p->m_k = p->T_star * two_k / (two_k - 1.0);
    slot = std::move(p);
  }
  return *slot;
}

WeightedOptimum weighted_optimum(int k, double weight) {
  if (!(weight > 0.0) || !std::isfinite(weight)) throw DomainError("weight must be positive");
  const OptimalProfile& prof = m_const(k);
  const double two_k = 2.0 * k;
  const double T = std::pow((two_k - 1.0) * weight * prof.c_k_double(), 1.0 / two_k);
  return {T, T + weight * prof.c_k_double() * std::pow(T, 1.0 - two_k)};
}

double m_scaled(int k, const ScalingParams& p) {
  if (!(p.alpha > 0.0) || !(p.kappa > 0.0) || !std::isfinite(p.alpha) || !std::isfinite(p.kappa)) {
    throw DomainError("alpha and kappa must be positive and finite");
  }
  const OptimalProfile& prof = m_const(k);
  const double closed = prof.m_k * std::pow(p.kappa, -1.0 / k) * std::pow(p.alpha, -0.5 / k);
  // Weighted route: a jump of 1/kappa costs alpha^{-1}-normalized energy
  // T + c_k / (alpha kappa^2) T^{1-2k}.
  const double routed = weighted_optimum(k, 1.0 / (p.alpha * p.kappa * p.kappa)).value;
  if (std::abs(routed - closed) > 1e-12 * closed) {
    throw InternalError("scaled jump constant: closed form and weighted minimization disagree");
  }
  return closed;
}

}  // namespace gammaflow
