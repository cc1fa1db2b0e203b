#include "gammaflow/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gammaflow/error.hpp"

namespace gammaflow {

namespace {

bool complies(const SbvSignal& u, double eta, double n_min_jump) {
  if (!u.plateaus_valid()) return false;
  for (const Jump& j : u.jumps())
    if (std::abs(j.z) <= n_min_jump || j.eta < eta) return false;
  return true;
}

std::vector<double> rescale_coeffs(std::vector<double> c, double stretch, double shift) {
  double f = 1.0;
  for (double& x : c) {
    x *= f;
    f *= stretch;
  }
  c[0] -= shift;
  return c;
}

}  // namespace

SbvSignal flatten(const SbvSignal& u, double eta, double n_min_jump) {
  if (!(eta > 0.0 && eta < 0.5)) throw DomainError("eta must lie in (0, 1/2)");
  if (!(n_min_jump >= 0.0)) throw DomainError("minimal jump must be non-negative");
  if (complies(u, eta, n_min_jump)) return u;

  std::vector<Jump> kept, dropped;
  for (const Jump& j : u.jumps()) (std::abs(j.z) > n_min_jump ? kept : dropped).push_back(j);
  const double opened = 2.0 * static_cast<double>(kept.size()) * eta;
  if (!(opened < 1.0)) throw DomainError("plateaus of radius eta cannot be made disjoint");
  const double stretch = 1.0 / (1.0 - opened);
  const double radius = eta * stretch;  // on the stretched domain

  auto mapped = [&](double x, std::size_t count) {
    return (x + 2.0 * static_cast<double>(count) * radius) / stretch;
  };
  auto kept_below = [&](double x, bool inclusive) {
    return static_cast<std::size_t>(std::count_if(kept.begin(), kept.end(), [&](const Jump& j) {
      return inclusive ? j.t <= x : j.t < x;
    }));
  };
  auto dropped_shift = [&](double x) {
    double s = 0.0;
    for (const Jump& j : dropped)
      if (j.t <= x) s += j.z;
    return s;
  };

  std::vector<PolySegment> segs;
  std::vector<Jump> jumps;
  std::size_t next = 0;
  for (const PolySegment& seg : u.segments()) {
    // Plateaus of a kept jump go in before the segment starting there.
    if (next < kept.size() && kept[next].t == seg.x0) {
      const Jump& j = kept[next];
      const double left = u.left_limit(j.t) - dropped_shift(std::nextafter(j.t, 0.0));
      const double mid = (j.t + (2.0 * static_cast<double>(next) + 1.0) * radius) / stretch;
      segs.push_back(PolySegment{mapped(j.t, next), mid, {left}});
      segs.push_back(PolySegment{mid, mapped(j.t, next + 1), {left + j.z}});
      jumps.push_back(Jump{mid, j.z, eta});
      ++next;
    }
    PolySegment s;
    s.x0 = mapped(seg.x0, kept_below(seg.x0, true));
    s.x1 = mapped(seg.x1, kept_below(seg.x1, false));
    s.coeffs = rescale_coeffs(seg.coeffs, stretch, dropped_shift(seg.x0));
    segs.push_back(std::move(s));
  }
  segs.front().x0 = 0.0;
  segs.back().x1 = 1.0;
  // Jump plateaus must fit inside (0, 1) after rounding.
  for (Jump& j : jumps) j.eta = std::min({eta, j.t, 1.0 - j.t});
  return SbvSignal(std::move(segs), std::move(jumps));
}

double window_width(double eps, double z, const OptimalProfile& prof, const RecoveryOptions& opt) {
  const double T = opt.profile_length.value_or(prof.T_star);
  return eps * std::pow(std::abs(opt.jump_scale * z), 1.0 / prof.k) * T;
}

namespace {

CompositeSignal paste(const SbvSignal& u, double eps, const OptimalProfile& prof, const RecoveryOptions& opt) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (opt.window_nodes < 2 * static_cast<std::size_t>(prof.k) + 2) throw DomainError("too few window nodes");
  if (!u.jumps().empty() && !u.plateaus_valid()) {
    throw DomainError("u must be constant on the plateau around each jump");
  }
  CompositeSignal out;
  auto bulk = [&](double a, double b) {
    if (!(b > a)) return;
    const auto n = std::max<std::size_t>(opt.min_bulk_nodes,
                                         static_cast<std::size_t>(std::ceil(opt.bulk_nodes_per_unit * (b - a))) + 1);
    Grid1D g{n, a, b - a};
    std::vector<double> v(n);
    for (std::size_t i = 0; i + 1 < n; ++i) v[i] = u.value(g.x(i));
    v[0] = u.value(a);
    v[n - 1] = u.left_limit(b);
    out.pieces.emplace_back(g, std::move(v));
  };
  double x = 0.0;
  for (const Jump& j : u.jumps()) {
    const double w = window_width(eps, j.z, prof, opt);
    if (!(w <= j.eta)) {
      throw DomainError("transition width " + std::to_string(w) + " exceeds the plateau radius at t = " +
                        std::to_string(j.t));
    }
    bulk(x, j.t);
    const double base = u.left_limit(j.t);
    Grid1D g{opt.window_nodes, j.t, w};
    std::vector<double> v(opt.window_nodes);
    const double last = static_cast<double>(opt.window_nodes - 1);
    for (std::size_t i = 0; i < opt.window_nodes; ++i) {
      v[i] = base + j.z * prof.unit_poly.eval(static_cast<double>(i) / last);
    }
    v.front() = base;
    v.back() = base + j.z;
    out.pieces.emplace_back(g, std::move(v));
    x = j.t + w;
  }
  bulk(x, 1.0);
  return out;
}

}  // namespace

CompositeSignal build_recovery(const SbvSignal& u, const EpsSchedule& s, const OptimalProfile& prof,
                               const RecoveryOptions& opt) {
  return paste(u, s.eps, prof, opt);
}

CompositeSignal build_recovery_surface(const SbvSignal& u, double eps, const OptimalProfile& prof,
                                       const RecoveryOptions& opt) {
  if (!u.piecewise_constant()) throw DomainError("nonzero absolutely continuous derivative");
  return paste(u, eps, prof, opt);
}

double l1_distance(const CompositeSignal& r, const SbvSignal& u) {
  double total = 0.0;
  for (const Signal& p : r.pieces) {
    const double h = p.grid.h();
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      const double xm = p.grid.origin + p.grid.length * ((static_cast<double>(i) + 0.5) / static_cast<double>(p.size() - 1));
      total += h * std::abs(0.5 * (p.values[i] + p.values[i + 1]) - u.value(xm));
    }
  }
  return total;
}

}  // namespace gammaflow
