#include "gammaflow/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "gammaflow/error.hpp"
#include "gammaflow/parallel.hpp"

namespace gammaflow {

std::vector<double> difference_stencil(int k) {
  std::vector<double> c(static_cast<std::size_t>(k) + 1);
  double binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    c[static_cast<std::size_t>(j)] = ((k - j) % 2 == 0 ? 1.0 : -1.0) * binom;
    binom = binom * (k - j) / (j + 1);
  }
  return c;
}

double density_value(const CellDensity& f, double d) {
  if (const auto* g = std::get_if<LogDensity>(&f)) return g->scale * std::log1p(g->inner * d * d);
  const auto& t = std::get<TruncatedQuadraticDensity>(f);
  return std::min(t.coeff * d * d, t.cap);
}

double density_slope(const CellDensity& f, double d) {
  if (const auto* g = std::get_if<LogDensity>(&f)) return g->scale * 2.0 * g->inner * d / (1.0 + g->inner * d * d);
  const auto& t = std::get<TruncatedQuadraticDensity>(f);
  return t.coeff * d * d < t.cap ? 2.0 * t.coeff * d : 0.0;
}

namespace {

struct Ranges {
  std::size_t c0, c1, w0, w1;
};

Ranges clip(const LocalEnergy& e, std::size_t n) {
  if (e.order < 1) throw DomainError("difference order must be >= 1");
  if (n <= static_cast<std::size_t>(e.order)) throw DomainError("grid has too few nodes for the difference order");
  const std::size_t cells = n - 1;
  const std::size_t windows = n - static_cast<std::size_t>(e.order);
  Ranges r{std::min(e.cell_begin, cells), std::min(e.cell_end, cells),
           std::min(e.window_begin, windows), std::min(e.window_end, windows)};
  r.c1 = std::max(r.c0, r.c1);
  r.w1 = std::max(r.w0, r.w1);
  return r;
}

double kth_at(std::span<const double> u, std::size_t i, const std::vector<double>& st, double inv_hk) {
  double s = 0.0;
  for (std::size_t j = 0; j < st.size(); ++j) s += st[j] * u[i + j];
  return s * inv_hk;
}

}  // namespace

namespace kernels {

void first_differences(std::span<const double> u, double h, std::span<double> out) {
  const auto cells = static_cast<std::ptrdiff_t>(u.size()) - 1;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < cells; ++i) out[i] = (u[i + 1] - u[i]) / h;
}

void kth_differences(std::span<const double> u, double h, int k, std::span<double> out) {
  const auto st = difference_stencil(k);
  const double inv_hk = std::pow(h, -k);
  const auto windows = static_cast<std::ptrdiff_t>(u.size()) - k;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < windows; ++i) out[i] = kth_at(u, static_cast<std::size_t>(i), st, inv_hk);
}

EnergyParts evaluate(const LocalEnergy& e, std::span<const double> u, double h) {
  const Ranges r = clip(e, u.size());
  const auto st = difference_stencil(e.order);
  const double inv_hk = std::pow(h, -e.order);
  EnergyParts out;
  out.bulk = h * parallel::blocked_sum(static_cast<std::ptrdiff_t>(r.c0), static_cast<std::ptrdiff_t>(r.c1),
                                       [&](std::ptrdiff_t i) { return density_value(e.density, (u[i + 1] - u[i]) / h); });
  if (e.penalty != 0.0) {
    out.penalty = e.penalty * h *
                  parallel::blocked_sum(static_cast<std::ptrdiff_t>(r.w0), static_cast<std::ptrdiff_t>(r.w1),
                                        [&](std::ptrdiff_t i) {
                                          const double w = kth_at(u, static_cast<std::size_t>(i), st, inv_hk);
                                          return w * w;
                                        });
  }
  return out;
}

EnergyParts evaluate(const LocalEnergy& e, std::span<const double> u, double h, std::span<double> grad) {
  const std::size_t n = u.size();
  const Ranges r = clip(e, n);
  const int k = e.order;
  const auto st = difference_stencil(k);
  const double inv_hk = std::pow(h, -k);
  const EnergyParts out = evaluate(e, u, h);

  // Per-cell and per-window derivative factors, zero outside the ranges.
  std::vector<double> slope(n - 1, 0.0);
  std::vector<double> wk(n - static_cast<std::size_t>(k), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(r.c0); i < static_cast<std::ptrdiff_t>(r.c1); ++i) {
    slope[i] = density_slope(e.density, (u[i + 1] - u[i]) / h);
  }
  if (e.penalty != 0.0) {
    const double f = 2.0 * e.penalty * h * inv_hk;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(r.w0); i < static_cast<std::ptrdiff_t>(r.w1); ++i) {
      wk[i] = f * kth_at(u, static_cast<std::size_t>(i), st, inv_hk);
    }
  }
  // Gather: node i collects from cells i-1, i and windows i-k..i.
  const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < nn; ++i) {
    double g = 0.0;
    if (i >= 1) g += slope[i - 1];
    if (i + 1 < nn) g -= slope[i];
    if (e.penalty != 0.0) {
      const std::ptrdiff_t jlo = std::max<std::ptrdiff_t>(0, i - k);
      const std::ptrdiff_t jhi = std::min<std::ptrdiff_t>(i, static_cast<std::ptrdiff_t>(wk.size()) - 1);
      for (std::ptrdiff_t j = jlo; j <= jhi; ++j) g += wk[j] * st[i - j];
    }
    grad[i] = g;
  }
  return out;
}

}  // namespace kernels

namespace reference {

std::vector<double> first_differences(std::span<const double> u, double h) {
  std::vector<double> d(u.size() - 1);
  for (std::size_t i = 0; i + 1 < u.size(); ++i) d[i] = (u[i + 1] - u[i]) / h;
  return d;
}

std::vector<double> kth_differences(std::span<const double> u, double h, int k) {
  // Repeated first differencing; algebraically equal to the binomial stencil.
  std::vector<double> d(u.begin(), u.end());
  for (int r = 0; r < k; ++r) {
    for (std::size_t i = 0; i + 1 < d.size(); ++i) d[i] = (d[i + 1] - d[i]) / h;
    d.pop_back();
  }
  return d;
}

EnergyParts evaluate(const LocalEnergy& e, std::span<const double> u, double h) {
  const Ranges r = clip(e, u.size());
  const auto d1 = first_differences(u, h);
  const auto dk = kth_differences(u, h, e.order);
  EnergyParts out;
  for (std::size_t i = r.c0; i < r.c1; ++i) out.bulk += h * density_value(e.density, d1[i]);
  for (std::size_t i = r.w0; i < r.w1; ++i) out.penalty += e.penalty * h * dk[i] * dk[i];
  return out;
}

EnergyParts evaluate(const LocalEnergy& e, std::span<const double> u, double h, std::span<double> grad) {
  const Ranges r = clip(e, u.size());
  const auto st = difference_stencil(e.order);
  const auto d1 = first_differences(u, h);
  const auto dk = kth_differences(u, h, e.order);
  std::fill(grad.begin(), grad.end(), 0.0);
  // Scatter form.
  for (std::size_t i = r.c0; i < r.c1; ++i) {
    const double s = density_slope(e.density, d1[i]);
    grad[i] -= s;
    grad[i + 1] += s;
  }
  for (std::size_t i = r.w0; i < r.w1; ++i) {
    const double f = 2.0 * e.penalty * h * dk[i] / std::pow(h, e.order);
    for (std::size_t j = 0; j < st.size(); ++j) grad[i + j] += f * st[j];
  }
  return evaluate(e, u, h);
}

}  // namespace reference

}  // namespace gammaflow
