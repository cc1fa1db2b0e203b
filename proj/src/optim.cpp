#include "gammaflow/optim.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "gammaflow/error.hpp"
#include "gammaflow/kernels.hpp"

namespace gammaflow {

double LinearForm::apply(std::span<const double> x) const {
  double s = 0.0;
  for (const auto& [i, c] : terms) s += c * x[i];
  return s;
}

void ConstraintSet::add_abs_bound(LinearForm form, double max_abs) {
  if (!(max_abs >= 0.0)) throw DomainError("bound must be non-negative");
  if (max_abs == 0.0) {
    equalities.push_back({std::move(form), 0.0});
  } else {
    bounds.push_back({std::move(form), -max_abs, max_abs});
  }
}

LinearForm boundary_derivative_form(std::size_t n, double h, int order, bool right_end) {
  if (order < 1 || n <= static_cast<std::size_t>(order)) throw DomainError("boundary stencil does not fit the grid");
  const auto st = difference_stencil(order);
  const double scale = std::pow(h, -order);
  const std::size_t first = right_end ? n - 1 - static_cast<std::size_t>(order) : 0;
  LinearForm f;
  for (std::size_t j = 0; j < st.size(); ++j) f.terms.emplace_back(first + j, st[j] * scale);
  return f;
}

namespace {

enum class Side { Equal, Lower, Upper, Inactive };

// Feasible-set projection in a block metric diag(M, 0) over the free
// coordinates, where M acts on the scaled coordinates and the flat ones are
// moved with zero cost.
class Projector {
 public:
  Projector(std::size_t m, std::vector<std::size_t> scaled, std::vector<std::size_t> flat,
            const BandedSpd* metric, std::vector<Eigen::VectorXd> rows, std::vector<double> lo,
            std::vector<double> hi, std::vector<bool> equality)
      : m_(m), scaled_(std::move(scaled)), flat_(std::move(flat)), rows_(std::move(rows)), lo_(std::move(lo)),
        hi_(std::move(hi)), equality_(std::move(equality)) {
    const std::size_t nc = rows_.size();
    q_.resize(nc);
    for (std::size_t r = 0; r < nc; ++r) {
      std::vector<double> v(scaled_.size());
      for (std::size_t a = 0; a < scaled_.size(); ++a) v[a] = rows_[r][static_cast<Eigen::Index>(scaled_[a])];
      if (metric != nullptr) metric->solve(v);
      q_[r] = std::move(v);
    }
    g_.resize(static_cast<Eigen::Index>(nc), static_cast<Eigen::Index>(nc));
    for (std::size_t r = 0; r < nc; ++r)
      for (std::size_t s = 0; s < nc; ++s) {
        double acc = 0.0;
        for (std::size_t a = 0; a < scaled_.size(); ++a) acc += rows_[r][static_cast<Eigen::Index>(scaled_[a])] * q_[s][a];
        g_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = acc;
      }
    std::vector<std::size_t> bound_rows;
    for (std::size_t r = 0; r < nc; ++r)
      if (!equality_[r]) bound_rows.push_back(r);
    if (bound_rows.size() > 10) throw DomainError("at most 10 bound constraints are supported");
    // All patterns of {inactive, lower, upper}, fewest active bounds first.
    std::size_t count = 1;
    for (std::size_t i = 0; i < bound_rows.size(); ++i) count *= 3;
    for (std::size_t code = 0; code < count; ++code) {
      std::vector<Side> sides(nc, Side::Equal);
      std::size_t c = code;
      for (std::size_t r : bound_rows) {
        sides[r] = c % 3 == 0 ? Side::Inactive : (c % 3 == 1 ? Side::Lower : Side::Upper);
        c /= 3;
      }
      patterns_.push_back(std::move(sides));
    }
    std::stable_sort(patterns_.begin(), patterns_.end(), [](const auto& a, const auto& b) {
      auto active = [](const std::vector<Side>& s) {
        return std::count_if(s.begin(), s.end(), [](Side x) { return x == Side::Lower || x == Side::Upper; });
      };
      return active(a) < active(b);
    });
  }

  bool empty() const { return rows_.empty(); }

  std::vector<double> project(const std::vector<double>& y) const {
    const std::size_t nc = rows_.size();
    if (nc == 0) return y;
    const Eigen::Map<const Eigen::VectorXd> ym(y.data(), static_cast<Eigen::Index>(m_));
    std::vector<double> cy(nc);
    for (std::size_t r = 0; r < nc; ++r) cy[r] = rows_[r].dot(ym);

    bool feasible = true;
    for (std::size_t r = 0; r < nc && feasible; ++r) {
      if (equality_[r]) feasible = std::abs(cy[r] - lo_[r]) <= tolerance(r) * 1e-3;
      else feasible = cy[r] >= lo_[r] && cy[r] <= hi_[r];
    }
    if (feasible) return y;

    for (const auto& sides : patterns_) {
      std::vector<std::size_t> act;
      for (std::size_t r = 0; r < nc; ++r)
        if (sides[r] != Side::Inactive) act.push_back(r);
      const auto na = static_cast<Eigen::Index>(act.size());
      const auto nf = static_cast<Eigen::Index>(flat_.size());
      Eigen::MatrixXd k = Eigen::MatrixXd::Zero(na + nf, na + nf);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(na + nf);
      for (Eigen::Index a = 0; a < na; ++a) {
        const std::size_t r = act[static_cast<std::size_t>(a)];
        for (Eigen::Index b = 0; b < na; ++b) k(a, b) = g_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(act[static_cast<std::size_t>(b)]));
        for (Eigen::Index f = 0; f < nf; ++f) {
          const double c = rows_[r][static_cast<Eigen::Index>(flat_[static_cast<std::size_t>(f)])];
          k(a, na + f) = c;
          k(na + f, a) = c;
        }
        rhs(a) = target(r, sides[r]) - cy[r];
      }
      Eigen::VectorXd sol;
      if (na + nf > 0) {
        // Symmetric equilibration: metric and flat blocks can differ by
        // many orders of magnitude.
        Eigen::VectorXd dscale(na + nf);
        for (Eigen::Index i = 0; i < na + nf; ++i) {
          const double r = k.row(i).lpNorm<Eigen::Infinity>();
          dscale(i) = r > 0.0 ? 1.0 / std::sqrt(r) : 1.0;
        }
        const Eigen::MatrixXd ks = dscale.asDiagonal() * k * dscale.asDiagonal();
        const Eigen::VectorXd rs = dscale.asDiagonal() * rhs;
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(ks);
        const Eigen::VectorXd ys = cod.solve(rs);
        const double res = (ks * ys - rs).lpNorm<Eigen::Infinity>();
        const double mag = (ks.cwiseAbs() * ys.cwiseAbs()).lpNorm<Eigen::Infinity>();
        // Inconsistent system: the active rows cannot all hold.
        if (!(res <= 1e-9 * (1.0 + rs.lpNorm<Eigen::Infinity>() + mag))) continue;
        sol = dscale.asDiagonal() * ys;
      }
      // Multiplier signs: pushing toward the interior only.
      bool ok = true;
      const double lscale = na > 0 ? 1e-12 * (1.0 + sol.head(na).lpNorm<Eigen::Infinity>()) : 0.0;
      for (Eigen::Index a = 0; a < na && ok; ++a) {
        const Side s = sides[act[static_cast<std::size_t>(a)]];
        if (s == Side::Upper && sol(a) > lscale) ok = false;
        if (s == Side::Lower && sol(a) < -lscale) ok = false;
      }
      if (!ok) continue;
      std::vector<double> z = y;
      for (Eigen::Index a = 0; a < na; ++a) {
        const double lam = sol(a);
        const auto& q = q_[act[static_cast<std::size_t>(a)]];
        for (std::size_t i = 0; i < scaled_.size(); ++i) z[scaled_[i]] += lam * q[i];
      }
      for (Eigen::Index f = 0; f < nf; ++f) z[flat_[static_cast<std::size_t>(f)]] += sol(na + f);
      const Eigen::Map<const Eigen::VectorXd> zm(z.data(), static_cast<Eigen::Index>(m_));
      for (std::size_t r = 0; r < nc && ok; ++r) {
        if (sides[r] != Side::Inactive) continue;
        const double v = rows_[r].dot(zm);
        const double tol = tolerance(r) + 1e-12 * rows_[r].cwiseAbs().dot(zm.cwiseAbs());
        ok = v >= lo_[r] - tol && v <= hi_[r] + tol;
      }
      if (ok) return z;
    }
    throw InternalError("no active set produced a feasible projection");
  }

 private:
  double target(std::size_t r, Side s) const { return s == Side::Upper ? hi_[r] : lo_[r]; }
  double tolerance(std::size_t r) const {
    return 1e-9 * std::max({1.0, std::abs(lo_[r]), std::abs(hi_[r])});
  }

  std::size_t m_;
  std::vector<std::size_t> scaled_, flat_;
  std::vector<Eigen::VectorXd> rows_;
  std::vector<double> lo_, hi_;
  std::vector<bool> equality_;
  std::vector<std::vector<double>> q_;
  Eigen::MatrixXd g_;
  std::vector<std::vector<Side>> patterns_;
};

// Free coordinates after eliminating pins, and constraints rewritten on them.
struct Reduction {
  std::vector<std::size_t> free;
  std::vector<std::ptrdiff_t> to_free;
  std::vector<double> pinned;  // full-size, pinned values (others 0)
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> lo, hi;
  std::vector<bool> equality;
};

Reduction reduce(std::size_t n, const ConstraintSet& c) {
  Reduction red;
  red.to_free.assign(n, 0);
  red.pinned.assign(n, 0.0);
  std::vector<bool> is_pinned(n, false);
  for (const Pin& p : c.pins) {
    if (p.index >= n) throw DomainError("pin index out of range");
    if (is_pinned[p.index]) throw DomainError("duplicate pin at index " + std::to_string(p.index));
    is_pinned[p.index] = true;
    red.pinned[p.index] = p.value;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (is_pinned[i]) {
      red.to_free[i] = -1;
    } else {
      red.to_free[i] = static_cast<std::ptrdiff_t>(red.free.size());
      red.free.push_back(i);
    }
  }
  const auto m = static_cast<Eigen::Index>(red.free.size());
  auto add = [&](const LinearForm& f, double lo, double hi, bool eq) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(m);
    double offset = 0.0;
    for (const auto& [i, coef] : f.terms) {
      if (i >= n) throw DomainError("constraint index out of range");
      if (red.to_free[i] < 0) offset += coef * red.pinned[i];
      else row(red.to_free[i]) += coef;
    }
    if (row.lpNorm<Eigen::Infinity>() == 0.0) {
      const double slack = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
      if (offset < lo - slack || offset > hi + slack) throw DomainError("constraint on pinned values is violated");
      return;
    }
    red.rows.push_back(std::move(row));
    red.lo.push_back(lo - offset);
    red.hi.push_back(hi - offset);
    red.equality.push_back(eq);
  };
  for (const auto& e : c.equalities) add(e.form, e.value, e.value, true);
  for (const auto& b : c.bounds) {
    if (!(b.lo <= b.hi)) throw DomainError("bound with lo > hi");
    add(b.form, b.lo, b.hi, false);
  }
  return red;
}

// Metric restricted to the free coordinates, factored, plus the split into
// scaled and flat free positions.
struct FreeMetric {
  bool identity = true;
  BandedSpd matrix;
  std::vector<std::size_t> scaled, flat;
};

FreeMetric free_metric(const std::optional<Metric>& met, const Reduction& red) {
  FreeMetric fm;
  const std::size_t m = red.free.size();
  if (!met) {
    fm.scaled.resize(m);
    std::iota(fm.scaled.begin(), fm.scaled.end(), std::size_t{0});
    return fm;
  }
  fm.identity = false;
  const std::size_t n = red.to_free.size();
  std::vector<bool> is_flat(n, false);
  for (std::size_t i : met->flat) {
    if (i >= n) throw DomainError("flat index out of range");
    is_flat[i] = true;
  }
  // Matrix rows follow the non-flat full indices in order.
  std::vector<std::size_t> keep;
  std::size_t row = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_flat[i]) {
      if (red.to_free[i] >= 0) fm.flat.push_back(static_cast<std::size_t>(red.to_free[i]));
      continue;
    }
    if (red.to_free[i] >= 0) {
      keep.push_back(row);
      fm.scaled.push_back(static_cast<std::size_t>(red.to_free[i]));
    }
    ++row;
  }
  if (met->matrix.size() != row) throw InternalError("metric size does not match the non-flat coordinates");
  fm.matrix = met->matrix.restricted(keep);
  fm.matrix.factor();
  return fm;
}

Projector make_projector(const FreeMetric& fm, const Reduction& red) {
  return Projector(red.free.size(), fm.scaled, fm.flat, fm.identity ? nullptr : &fm.matrix, red.rows, red.lo, red.hi,
                   red.equality);
}

// M^{-1} g on the scaled coordinates, zero on flat ones.
std::vector<double> scaled_direction(const FreeMetric& fm, const std::vector<double>& g) {
  std::vector<double> d(g.size(), 0.0);
  std::vector<double> gs(fm.scaled.size());
  for (std::size_t a = 0; a < fm.scaled.size(); ++a) gs[a] = g[fm.scaled[a]];
  if (!fm.identity) fm.matrix.solve(gs);
  for (std::size_t a = 0; a < fm.scaled.size(); ++a) d[fm.scaled[a]] = gs[a];
  return d;
}

double sup_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace

std::vector<double> project_feasible(const DiscreteEnergy& e, const ConstraintSet& c, std::vector<double> x) {
  const Reduction red = reduce(x.size(), c);
  const FreeMetric fm = free_metric(e.metric(x), red);
  const Projector proj = make_projector(fm, red);
  std::vector<double> xf(red.free.size());
  for (std::size_t a = 0; a < xf.size(); ++a) xf[a] = x[red.free[a]];
  xf = proj.project(xf);
  for (std::size_t a = 0; a < xf.size(); ++a) x[red.free[a]] = xf[a];
  for (const Pin& p : c.pins) x[p.index] = p.value;
  return x;
}

MinimizeResult minimize(const DiscreteEnergy& e, const ConstraintSet& c, std::vector<double> init,
                        const MinimizeOptions& opt) {
  const std::size_t n = e.size();
  if (init.size() != n) throw DomainError("initial guess has the wrong size");
  if (!(opt.tol > 0.0)) throw DomainError("tolerance must be positive");
  for (const Pin& p : c.pins) {
    if (p.index >= n) throw DomainError("pin index out of range");
    if (std::abs(init[p.index] - p.value) > 1e-12 * std::max(1.0, std::abs(p.value))) {
      throw DomainError("initial guess violates the pin at index " + std::to_string(p.index));
    }
    init[p.index] = p.value;
  }
  const Reduction red = reduce(n, c);
  const std::size_t m = red.free.size();

  std::vector<double> x = std::move(init);
  FreeMetric fm = free_metric(e.metric(x), red);
  Projector proj = make_projector(fm, red);

  auto gather = [&](const std::vector<double>& full) {
    std::vector<double> v(m);
    for (std::size_t a = 0; a < m; ++a) v[a] = full[red.free[a]];
    return v;
  };
  auto scatter = [&](const std::vector<double>& v, std::vector<double>& full) {
    for (std::size_t a = 0; a < m; ++a) full[red.free[a]] = v[a];
  };

  std::vector<double> xf = proj.project(gather(x));
  scatter(xf, x);

  MinimizeResult res;
  std::vector<double> grad(n);
  double f = e.evaluate(x, grad);
  res.history.push_back(f);
  std::vector<double> prev_xf, prev_gf;
  double bb = 1.0;

  for (int it = 0; it < opt.max_iter; ++it) {
    const std::vector<double> gf = gather(grad);
    const std::vector<double> d = scaled_direction(fm, gf);

    std::vector<double> trial(m);
    for (std::size_t a = 0; a < m; ++a) trial[a] = xf[a] - d[a];
    std::vector<double> p = proj.project(trial);
    double stat = 0.0;
    for (std::size_t a = 0; a < m; ++a) stat = std::max(stat, std::abs(p[a] - xf[a]));
    res.stationarity = stat / std::max(1.0, sup_norm(xf));
    if (res.stationarity <= opt.tol) {
      res.converged = true;
      break;
    }

    double alpha = 1.0;
    if (fm.identity) {
      if (prev_xf.empty()) {
        alpha = 1.0 / std::max(stat, 1e-300);
      } else {
        double ss = 0.0, sy = 0.0;
        for (std::size_t a = 0; a < m; ++a) {
          const double s = xf[a] - prev_xf[a];
          ss += s * s;
          sy += s * (gf[a] - prev_gf[a]);
        }
        bb = sy > 0.0 ? ss / sy : 1e6 * bb;
        alpha = std::clamp(bb, 1e-30, 1e30);
      }
    }

    bool accepted = false;
    std::vector<double> xnew(n);
    std::vector<double> gnew(n);
    double fnew = f;
    for (int bt = 0; bt <= opt.max_backtracks; ++bt) {
      for (std::size_t a = 0; a < m; ++a) trial[a] = xf[a] - alpha * d[a];
      const std::vector<double> z = proj.project(trial);
      double dec = 0.0;
      for (std::size_t a = 0; a < m; ++a) dec += gf[a] * (z[a] - xf[a]);
      xnew = x;
      scatter(z, xnew);
      fnew = e.evaluate(xnew, gnew);
      if (fnew <= f + opt.armijo * dec) {
        accepted = true;
        prev_xf = xf;
        prev_gf = gf;
        xf = z;
        break;
      }
      alpha *= 0.5;
    }
    res.iterations = it + 1;
    if (!accepted) break;
    if (fnew > f) throw InternalError("accepted step increased the objective");
    x = std::move(xnew);
    grad = std::move(gnew);
    f = fnew;
    res.history.push_back(f);
    if (!e.metric_is_constant()) {
      fm = free_metric(e.metric(x), red);
      proj = make_projector(fm, red);
    }
  }
  res.x = std::move(x);
  res.value = f;
  return res;
}

double grad_check(const DiscreteEnergy& e, std::span<const double> x0, double h_fd) {
  const std::size_t n = e.size();
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> grad(n);
  e.evaluate(x, grad);
  const double gscale = sup_norm(grad);

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (n > 32) {
    std::mt19937_64 rng(0x5eed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(32);
    std::sort(idx.begin(), idx.end());
  }
  std::vector<double> scratch;
  double worst = 0.0;
  for (std::size_t i : idx) {
    const double step = h_fd * (1.0 + std::abs(x[i]));
    const double keep = x[i];
    x[i] = keep + step;
    const double fp = e.evaluate(x, scratch);
    x[i] = keep - step;
    const double fm = e.evaluate(x, scratch);
    x[i] = keep;
    const double fd = (fp - fm) / (2.0 * step);
    const double denom = std::max({std::abs(fd), std::abs(grad[i]), gscale, 1e-300});
    worst = std::max(worst, std::abs(fd - grad[i]) / denom);
  }
  return worst;
}

}  // namespace gammaflow
