#include "gammaflow/banded.hpp"

#include <lapacke.h>

#include <algorithm>
#include <string>

#include "gammaflow/error.hpp"

namespace gammaflow {

BandedSpd::BandedSpd(std::size_t n, std::size_t bandwidth)
    : n_(n), kd_(std::min(bandwidth, n == 0 ? 0 : n - 1)), ab_((kd_ + 1) * n, 0.0) {}

void BandedSpd::add(std::size_t i, std::size_t j, double v) {
  if (i < j) std::swap(i, j);
  if (i - j > kd_) throw InternalError("entry outside the band");
  at(i, j) += v;
  factored_ = false;
}

double BandedSpd::get(std::size_t i, std::size_t j) const {
  if (i < j) std::swap(i, j);
  if (i - j > kd_) return 0.0;
  return at(i, j);
}

void BandedSpd::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    const std::size_t lo = i >= kd_ ? i - kd_ : 0;
    const std::size_t hi = std::min(n_ - 1, i + kd_);
    for (std::size_t j = lo; j <= hi; ++j) s += get(i, j) * x[j];
    y[i] = s;
  }
}

void BandedSpd::factor() {
  factor_ = ab_;
  const auto n = static_cast<lapack_int>(n_);
  const auto kd = static_cast<lapack_int>(kd_);
  const lapack_int info = LAPACKE_dpbtrf(LAPACK_COL_MAJOR, 'L', n, kd, factor_.data(), kd + 1);
  if (info != 0) throw DomainError("band matrix is not positive definite (dpbtrf info " + std::to_string(info) + ")");
  factored_ = true;
}

void BandedSpd::solve(std::span<double> b) const {
  if (!factored_) throw InternalError("solve before factor");
  const auto n = static_cast<lapack_int>(n_);
  const auto kd = static_cast<lapack_int>(kd_);
  const lapack_int info =
      LAPACKE_dpbtrs(LAPACK_COL_MAJOR, 'L', n, kd, 1, factor_.data(), kd + 1, b.data(), n);
  if (info != 0) throw InternalError("dpbtrs failed");
}

BandedSpd BandedSpd::restricted(const std::vector<std::size_t>& keep) const {
  BandedSpd out(keep.size(), kd_);
  for (std::size_t a = 0; a < keep.size(); ++a) {
    for (std::size_t b = a; b < keep.size() && keep[b] - keep[a] <= kd_; ++b) {
      const double v = get(keep[a], keep[b]);
      if (v != 0.0) out.add(b, a, v);
    }
  }
  return out;
}

}  // namespace gammaflow
