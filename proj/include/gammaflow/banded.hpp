#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gammaflow {

/// Symmetric positive definite band matrix in LAPACK lower band storage,
/// factored with dpbtrf and solved with dpbtrs.
class BandedSpd {
 public:
  BandedSpd() = default;
  BandedSpd(std::size_t n, std::size_t bandwidth);

  std::size_t size() const { return n_; }
  std::size_t bandwidth() const { return kd_; }

  /// Adds v to entry (i, j) (and implicitly (j, i)). Requires |i - j| <= bandwidth.
  void add(std::size_t i, std::size_t j, double v);
  double get(std::size_t i, std::size_t j) const;

  /// y = A x, using the unfactored entries.
  void multiply(std::span<const double> x, std::span<double> y) const;

  /// Cholesky factorization; throws DomainError if not positive definite.
  void factor();
  bool factored() const { return factored_; }
  /// In-place solve A x = b after factor().
  void solve(std::span<double> b) const;

  /// Principal submatrix on the listed (increasing) indices.
  BandedSpd restricted(const std::vector<std::size_t>& keep) const;

 private:
  double& at(std::size_t i, std::size_t j) { return ab_[(i - j) + j * (kd_ + 1)]; }
  double at(std::size_t i, std::size_t j) const { return ab_[(i - j) + j * (kd_ + 1)]; }

  std::size_t n_ = 0;
  std::size_t kd_ = 0;
  std::vector<double> ab_;
  std::vector<double> factor_;
  bool factored_ = false;
};

}  // namespace gammaflow
