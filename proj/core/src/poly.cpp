#include "hm/poly.hpp"

#include <algorithm>

#include "hm/error.hpp"

namespace hm {

Poly Poly::monomial(unsigned degree, cplx coeff) {
  std::vector<cplx> c(degree + 1);
  c[degree] = coeff;
  return Poly(std::move(c));
}

int Poly::degree() const {
  for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k)
    if (c_[static_cast<std::size_t>(k)] != cplx{}) return k;
  return -1;
}

cplx Poly::operator()(cplx x) const {
  cplx acc{};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<cplx> Poly::highest_first() const {
  const int d = degree();
  if (d < 0) return {cplx{}};
  std::vector<cplx> out(c_.begin(), c_.begin() + d + 1);
  std::reverse(out.begin(), out.end());
  return out;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Poly operator-(const Poly& a) {
  Poly r = a;
  for (auto& c : r.c_) c = -c;
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.c_.empty() || b.c_.empty()) return Poly{};
  std::vector<cplx> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == cplx{}) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  return Poly(std::move(c));
}

Poly operator/(const Poly& a, const Poly& b) {
  if (!b.is_constant()) throw Error(ErrorKind::NotPolynomial, "division by a non-constant polynomial");
  const cplx inv = 1.0 / b.constant_term();
  Poly r = a;
  for (auto& c : r.c_) c *= inv;
  return r;
}

Poly exp_of(const Poly& a) {
  if (!a.is_constant()) throw Error(ErrorKind::NotPolynomial, "exp of a non-constant polynomial");
  return Poly(std::exp(a.constant_term()));
}

Poly pow_of(const Poly& a, unsigned n) {
  Poly result(cplx{1.0});
  Poly base = a;
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return result;
}

}  // namespace hm
