#include "gammaflow/sbv.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gammaflow/error.hpp"

namespace gammaflow {

double PolySegment::value(double x) const {
  const double s = x - x0;
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * s + *it;
  return acc;
}

double PolySegment::slope(double x) const {
  const double s = x - x0;
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 1;) acc = acc * s + static_cast<double>(i) * coeffs[i];
  return acc;
}

bool PolySegment::is_constant() const {
  for (std::size_t i = 1; i < coeffs.size(); ++i)
    if (coeffs[i] != 0.0) return false;
  return true;
}

double PolySegment::dirichlet() const {
  if (coeffs.size() < 2) return 0.0;
  std::vector<double> d(coeffs.size() - 1);
  for (std::size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs[i];
  const double len = x1 - x0;
  double total = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j)
      total += d[i] * d[j] * std::pow(len, static_cast<double>(i + j + 1)) / static_cast<double>(i + j + 1);
  return total;
}

namespace {

constexpr double kTol = 1e-12;

bool near(double a, double b, double scale) { return std::abs(a - b) <= kTol * std::max(1.0, scale); }

}  // namespace

SbvSignal::SbvSignal(std::vector<PolySegment> segments, std::vector<Jump> jumps)
    : segments_(std::move(segments)), jumps_(std::move(jumps)) {
  if (segments_.empty()) throw DomainError("an SBV signal needs at least one segment");
  if (segments_.front().x0 != 0.0 || segments_.back().x1 != 1.0) {
    throw DomainError("segments must cover [0, 1]");
  }
  for (const auto& seg : segments_) {
    if (!(seg.x1 > seg.x0)) throw DomainError("segment with non-positive length");
    if (seg.coeffs.empty()) throw DomainError("segment without coefficients");
  }
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    const Jump& j = jumps_[i];
    if (!(j.t > 0.0 && j.t < 1.0)) throw DomainError("jump location must lie in (0, 1)");
    if (j.z == 0.0 || !std::isfinite(j.z)) throw DomainError("jump size must be nonzero and finite");
    if (!(j.eta >= 0.0)) throw DomainError("plateau radius must be non-negative");
    if (i > 0 && !(j.t > jumps_[i - 1].t)) throw DomainError("jump locations must be strictly increasing");
  }
  // Breaks must be continuity points or jumps of the declared size.
  std::size_t next_jump = 0;
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    const double t = segments_[i].x1;
    if (segments_[i + 1].x0 != t) throw DomainError("segments must be contiguous");
    const double left = segments_[i].value(t);
    const double right = segments_[i + 1].value(t);
    while (next_jump < jumps_.size() && jumps_[next_jump].t < t) {
      throw DomainError("jump at " + std::to_string(jumps_[next_jump].t) + " is not at a segment break");
    }
    if (next_jump < jumps_.size() && jumps_[next_jump].t == t) {
      if (!near(right - left, jumps_[next_jump].z, std::abs(jumps_[next_jump].z))) {
        throw DomainError("jump size does not match the segment values at " + std::to_string(t));
      }
      ++next_jump;
    } else if (!near(left, right, std::abs(left))) {
      throw DomainError("undeclared discontinuity at " + std::to_string(t));
    }
  }
  if (next_jump != jumps_.size()) throw DomainError("jump is not at a segment break");
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    const Jump& j = jumps_[i];
    if (j.t - j.eta < 0.0 || j.t + j.eta > 1.0) throw DomainError("plateau leaves (0, 1)");
    if (i > 0 && jumps_[i - 1].t + jumps_[i - 1].eta > j.t - j.eta) throw DomainError("plateaus overlap");
  }
}

double SbvSignal::value(double x) const {
  for (const auto& seg : segments_)
    if (x < seg.x1) return seg.value(x);
  return segments_.back().value(x);
}

double SbvSignal::left_limit(double x) const {
  for (const auto& seg : segments_)
    if (x <= seg.x1) return seg.value(x);
  return segments_.back().value(x);
}

bool SbvSignal::piecewise_constant() const {
  return std::all_of(segments_.begin(), segments_.end(), [](const PolySegment& s) { return s.is_constant(); });
}

bool SbvSignal::plateaus_valid() const {
  for (const Jump& j : jumps_) {
    if (!(j.eta > 0.0)) return false;
    for (const auto& seg : segments_) {
      const bool overlaps = seg.x1 > j.t - j.eta && seg.x0 < j.t + j.eta;
      if (overlaps && !seg.is_constant()) return false;
    }
  }
  return true;
}

double SbvSignal::dirichlet() const {
  double total = 0.0;
  for (const auto& seg : segments_) total += seg.dirichlet();
  return total;
}

double SbvSignal::jump_sum(int k) const {
  double total = 0.0;
  for (const Jump& j : jumps_) total += std::pow(std::abs(j.z), 1.0 / k);
  return total;
}

double limit_energy(const SbvSignal& u, int k) { return u.dirichlet() + m_const(k).m_k * u.jump_sum(k); }

double weighted_limit_energy(const SbvSignal& u, int k, const ScalingParams& p) {
  return p.alpha * p.kappa * p.kappa * u.dirichlet() +
         std::pow(p.alpha, 1.0 - 0.5 / k) * m_const(k).m_k * u.jump_sum(k);
}

double surface_limit_energy(const SbvSignal& u, int k) {
  if (!u.piecewise_constant()) throw DomainError("nonzero absolutely continuous derivative");
  return m_const(k).m_k * u.jump_sum(k);
}

SbvSignal step_signal(double t, double z, double eta, double base) {
  return SbvSignal({PolySegment{0.0, t, {base}}, PolySegment{t, 1.0, {base + z}}}, {Jump{t, z, eta}});
}

SbvSignal affine_signal(double a, double b) { return SbvSignal({PolySegment{0.0, 1.0, {a, b}}}, {}); }

SbvSignal staircase_signal(const std::vector<Jump>& jumps, double base) {
  std::vector<PolySegment> segs;
  double x = 0.0;
  double level = base;
  for (const Jump& j : jumps) {
    segs.push_back(PolySegment{x, j.t, {level}});
    x = j.t;
    level += j.z;
  }
  segs.push_back(PolySegment{x, 1.0, {level}});
  return SbvSignal(std::move(segs), jumps);
}

}  // namespace gammaflow
