#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace gammaflow {

/// Polynomial with exact rational coefficients; coeffs[i] multiplies s^i.
/// Trailing zero coefficients are trimmed, so the zero polynomial has no
/// coefficients.
class RationalPolynomial {
 public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<mpq_class> coeffs);

  const std::vector<mpq_class>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  mpq_class operator()(const mpq_class& s) const;
  double eval(double s) const;

  RationalPolynomial derivative(int order = 1) const;
  /// p(a + b s) expanded in s.
  RationalPolynomial compose_affine(const mpq_class& a, const mpq_class& b) const;
  /// Exact integral over [0, 1].
  mpq_class integrate_unit() const;

  friend RationalPolynomial operator+(const RationalPolynomial& a, const RationalPolynomial& b);
  friend RationalPolynomial operator-(const RationalPolynomial& a, const RationalPolynomial& b);
  friend RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b);
  friend bool operator==(const RationalPolynomial& a, const RationalPolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

  std::string to_string() const;

 private:
  void trim();
  std::vector<mpq_class> coeffs_;
};

/// Solves A x = b exactly by Gaussian elimination with nonzero pivoting.
/// Throws InternalError when A is singular.
std::vector<mpq_class> solve_exact(std::vector<std::vector<mpq_class>> a,
                                   std::vector<mpq_class> b);

}  // namespace gammaflow
