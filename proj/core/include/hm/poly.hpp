#pragma once

#include <vector>

#include "hm/jet.hpp"

namespace hm {

/// Univariate polynomial with complex coefficients, lowest degree first.
/// Used as an evaluation algebra: running an expression over Poly values
/// expands it in one variable, and fails with NotPolynomial on anything that
/// is not a polynomial (division by a non-constant, exp of a non-constant).
class Poly {
 public:
  Poly() = default;
  explicit Poly(cplx constant) : c_{constant} {}
  explicit Poly(std::vector<cplx> ascending) : c_(std::move(ascending)) {}

  static Poly monomial(unsigned degree, cplx coeff = 1.0);

  const std::vector<cplx>& coeffs() const { return c_; }
  /// Index of the highest nonzero coefficient; -1 for the zero polynomial.
  int degree() const;
  bool is_constant() const { return degree() <= 0; }
  cplx constant_term() const { return c_.empty() ? cplx{} : c_[0]; }
  cplx operator()(cplx x) const;

  /// Coefficients ordered highest degree first, trimmed to degree().
  std::vector<cplx> highest_first() const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(const Poly& a);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator/(const Poly& a, const Poly& b);

 private:
  std::vector<cplx> c_;
};

Poly exp_of(const Poly& a);
Poly pow_of(const Poly& a, unsigned n);
inline bool vanishes(const Poly& a) { return a.degree() < 0; }

}  // namespace hm
