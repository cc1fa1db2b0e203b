#include "gammaflow/transition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gammaflow/energy.hpp"
#include "gammaflow/error.hpp"
#include "gammaflow/objectives.hpp"
#include "gammaflow/parallel.hpp"

namespace gammaflow {

ProfileProblem ProfileProblem::clamped(int k, double T, double z) {
  ProfileProblem p;
  p.k = k;
  p.T = T;
  p.z = z;
  p.left.assign(static_cast<std::size_t>(k - 1), EndCondition(0.0));
  p.right = p.left;
  return p;
}

ProfileProblem ProfileProblem::bounded(int k, double T, double z, double bound, int last) {
  ProfileProblem p;
  p.k = k;
  p.T = T;
  p.z = z;
  p.left.assign(static_cast<std::size_t>(k - 1), std::nullopt);
  for (int l = 1; l <= std::min(last, k - 1); ++l) p.left[static_cast<std::size_t>(l - 1)] = bound;
  p.right = p.left;
  return p;
}

std::size_t nodes_for_length(double T, double per_unit, std::size_t min_intervals) {
  const auto m = static_cast<std::size_t>(std::ceil(per_unit * T));
  return std::max(m, min_intervals) + 1;
}

namespace {

void check_problem(const ProfileProblem& p, std::size_t n) {
  if (p.k < 1 || p.k > kMaxOrder) throw DomainError("k must lie in 1..12");
  if (!(p.T > 0.0) || !std::isfinite(p.T)) throw DomainError("T must be positive and finite");
  if (!(p.weight > 0.0)) throw DomainError("weight must be positive");
  if (!std::isfinite(p.z)) throw DomainError("jump must be finite");
  const auto km1 = static_cast<std::size_t>(p.k - 1);
  if (p.left.size() != km1 || p.right.size() != km1) throw DomainError("need one end condition per order 1..k-1");
  for (const auto* side : {&p.left, &p.right})
    for (const auto& c : *side)
      if (c && !(*c >= 0.0)) throw DomainError("end bounds must be non-negative");
  if (n < 2 * static_cast<std::size_t>(p.k) + 2) throw DomainError("too few nodes for the transition problem");
}

// C(i, r) in double; exact for the sizes used here.
double binom(std::size_t i, std::size_t r) {
  if (r > i) return 0.0;
  double c = 1.0;
  for (std::size_t j = 0; j < r; ++j) c = c * static_cast<double>(i - j) / static_cast<double>(j + 1);
  return c;
}

// weight h sum w^2 over the k-th difference block; flat scaled differences.
class DerivativeCoordinateEnergy : public DiscreteEnergy {
 public:
  DerivativeCoordinateEnergy(std::size_t flat, std::size_t windows, double coef)
      : flat_(flat), windows_(windows), coef_(coef) {}
  std::size_t size() const override { return flat_ + windows_; }
  double evaluate(std::span<const double> x, std::span<double> grad) const override {
    const double s = parallel_sum(x);
    if (!grad.empty()) {
      for (std::size_t i = 0; i < flat_; ++i) grad[i] = 0.0;
      for (std::size_t j = 0; j < windows_; ++j) grad[flat_ + j] = 2.0 * coef_ * x[flat_ + j];
    }
    return coef_ * s;
  }
  std::optional<Metric> metric(std::span<const double>) const override {
    Metric m{BandedSpd(windows_, 0), {}};
    for (std::size_t j = 0; j < windows_; ++j) m.matrix.add(j, j, 2.0 * coef_);
    for (std::size_t i = 0; i < flat_; ++i) m.flat.push_back(i);
    return m;
  }

 private:
  double parallel_sum(std::span<const double> x) const {
    return parallel::blocked_sum(0, static_cast<std::ptrdiff_t>(windows_), [&](std::ptrdiff_t j) {
      const double w = x[flat_ + static_cast<std::size_t>(j)];
      return w * w;
    });
  }
  std::size_t flat_, windows_;
  double coef_;
};

}  // namespace

TransitionSolution solve_transition(const ProfileProblem& p, std::size_t n, const MinimizeOptions& opt) {
  check_problem(p, n);
  // Solved on [0, 1]: u(s) = v(T s) has u^{(l)} = T^l v^{(l)} and
  // int_0^T |v^{(k)}|^2 = T^{1-2k} int_0^1 |u^{(k)}|^2. Same discrete
  // problem, far better scaled for small or large T.
  const auto k = static_cast<std::size_t>(p.k);
  const std::size_t flat = k - 1;
  const std::size_t windows = n - k;
  const double h = 1.0 / static_cast<double>(n - 1);
  auto scaled_bound = [&](const EndCondition& c, std::size_t l) { return *c * std::pow(p.T, static_cast<double>(l)); };
  std::vector<double> hp(k + 1, 1.0);
  for (std::size_t l = 1; l <= k; ++l) hp[l] = hp[l - 1] * h;

  // Backward difference of order l at the right end, divided by h^l, as a
  // form in (a, w). Order 0 is v(T) itself.
  auto right_form = [&](std::size_t l) {
    const std::size_t m = n - 1 - l;
    LinearForm f;
    for (std::size_t q = std::max<std::size_t>(l, 1); q <= k - 1; ++q) {
      const double c = binom(m, q - l) * hp[q - l];
      if (c != 0.0) f.terms.emplace_back(q - 1, c);
    }
    const std::size_t order = k - l;
    if (m >= order) {
      for (std::size_t j = 0; j <= m - order; ++j) {
        f.terms.emplace_back(flat + j, binom(m - 1 - j, order - 1) * hp[order]);
      }
    }
    return f;
  };

  ConstraintSet cs;
  cs.equalities.push_back({right_form(0), p.z});
  for (std::size_t l = 1; l <= flat; ++l) {
    if (const auto& c = p.left[l - 1]) {
      const double b = scaled_bound(c, l);
      if (b == 0.0) cs.pins.push_back({l - 1, 0.0});
      else cs.bounds.push_back({LinearForm{{{l - 1, 1.0}}}, -b, b});
    }
    if (const auto& c = p.right[l - 1]) cs.add_abs_bound(right_form(l), scaled_bound(c, l));
  }

  DerivativeCoordinateEnergy e(flat, windows, p.weight * h);
  const MinimizeResult r = minimize(e, cs, std::vector<double>(flat + windows, 0.0), opt);

  TransitionSolution out;
  out.derivative_energy = r.value * std::pow(p.T, 1.0 - 2.0 * p.k);
  out.total = p.T + out.derivative_energy;
  out.converged = r.converged;
  out.iterations = r.iterations;
  out.h = p.T / static_cast<double>(n - 1);
  // Rebuild node values by cumulative sums from the highest order down.
  std::vector<double> level(windows);
  for (std::size_t j = 0; j < windows; ++j) level[j] = hp[k] * r.x[flat + j];
  for (std::size_t l = k; l-- > 0;) {
    std::vector<double> lower(n - l);
    lower[0] = l == 0 ? 0.0 : hp[l] * r.x[l - 1];
    for (std::size_t i = 0; i + 1 < lower.size(); ++i) lower[i + 1] = lower[i] + level[i];
    level = std::move(lower);
  }
  out.v = std::move(level);
  return out;
}

TransitionSolution solve_transition_nodes(const ProfileProblem& p, std::size_t n, const MinimizeOptions& opt) {
  check_problem(p, n);
  const auto k = static_cast<std::size_t>(p.k);
  const double h = p.T / static_cast<double>(n - 1);
  bool all_clamped = true;
  for (const auto* side : {&p.left, &p.right})
    for (const auto& c : *side) all_clamped = all_clamped && c && *c == 0.0;
  if (!all_clamped && k > 2) throw DomainError("node-value solver handles non-clamped ends only for k <= 2");

  ConstraintSet cs;
  cs.pins.push_back({0, 0.0});
  cs.pins.push_back({n - 1, p.z});
  if (all_clamped) {
    for (std::size_t i = 1; i < k; ++i) {
      cs.pins.push_back({i, 0.0});
      cs.pins.push_back({n - 1 - i, p.z});
    }
  } else {
    for (std::size_t l = 1; l < k; ++l) {
      if (const auto& c = p.left[l - 1]) cs.add_abs_bound(boundary_derivative_form(n, h, static_cast<int>(l), false), *c);
      if (const auto& c = p.right[l - 1]) cs.add_abs_bound(boundary_derivative_form(n, h, static_cast<int>(l), true), *c);
    }
  }
  LocalEnergy le{LogDensity{0.0, 0.0}, p.k, p.weight};
  NodeEnergy e(le, Grid1D{n, 0.0, p.T});
  std::vector<double> init(n);
  for (std::size_t i = 0; i < n; ++i) init[i] = p.z * static_cast<double>(i) / static_cast<double>(n - 1);
  for (const Pin& pin : cs.pins) init[pin.index] = pin.value;
  const MinimizeResult r = minimize(e, cs, std::move(init), opt);

  TransitionSolution out;
  out.derivative_energy = r.value;
  out.total = p.T + r.value;
  out.converged = r.converged;
  out.iterations = r.iterations;
  out.h = h;
  out.v = r.x;
  return out;
}

}  // namespace gammaflow
