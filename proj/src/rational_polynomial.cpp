#include "gammaflow/rational_polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "gammaflow/error.hpp"

namespace gammaflow {

RationalPolynomial::RationalPolynomial(std::vector<mpq_class> coeffs) : coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c.canonicalize();
  trim();
}

void RationalPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

mpq_class RationalPolynomial::operator()(const mpq_class& s) const {
  mpq_class acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

double RationalPolynomial::eval(double s) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + it->get_d();
  return acc;
}

RationalPolynomial RationalPolynomial::derivative(int order) const {
  std::vector<mpq_class> c = coeffs_;
  for (int r = 0; r < order && !c.empty(); ++r) {
    std::vector<mpq_class> d;
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<long>(i));
    c = std::move(d);
  }
  return RationalPolynomial(std::move(c));
}

RationalPolynomial RationalPolynomial::compose_affine(const mpq_class& a, const mpq_class& b) const {
  // Horner in polynomial arithmetic: p(a + b s).
  RationalPolynomial lin({a, b});
  RationalPolynomial acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * lin + RationalPolynomial({*it});
  }
  return acc;
}

mpq_class RationalPolynomial::integrate_unit() const {
  mpq_class acc = 0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    acc += coeffs_[i] / mpq_class(static_cast<long>(i + 1));
  }
  return acc;
}

RationalPolynomial operator+(const RationalPolynomial& a, const RationalPolynomial& b) {
  std::vector<mpq_class> c(std::max(a.coeffs_.size(), b.coeffs_.size()), mpq_class(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return RationalPolynomial(std::move(c));
}

RationalPolynomial operator-(const RationalPolynomial& a, const RationalPolynomial& b) {
  std::vector<mpq_class> c(std::max(a.coeffs_.size(), b.coeffs_.size()), mpq_class(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
  return RationalPolynomial(std::move(c));
}

RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpq_class> c(a.coeffs_.size() + b.coeffs_.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return RationalPolynomial(std::move(c));
}

std::string RationalPolynomial::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    if (!first) out << (coeffs_[i] > 0 ? " + " : " - ");
    else if (coeffs_[i] < 0) out << "-";
    first = false;
    mpq_class mag = abs(coeffs_[i]);
    if (i == 0 || mag != 1) out << mag.get_str();
    if (i >= 1) out << (i == 0 || mag != 1 ? "*" : "") << "s";
    if (i >= 2) out << "^" << i;
  }
  return out.str();
}

std::vector<mpq_class> solve_exact(std::vector<std::vector<mpq_class>> a, std::vector<mpq_class> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw InternalError("singular exact system");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      const mpq_class f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<mpq_class> x(n);
  for (std::size_t i = n; i-- > 0;) {
    mpq_class acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
    x[i] = acc / a[i][i];
  }
  return x;
}

}  // namespace gammaflow
