#include "hm/jet.hpp"

#include <cassert>

namespace hm {

Jet::Jet(cplx value, std::size_t n, int order)
    : value_(value), first_(n), second_(order >= 2 ? n * n : 0), order_(order) {}

Jet Jet::variable(cplx value, std::size_t index, std::size_t n, int order) {
  Jet j(value, n, order);
  j.first_[index] = 1.0;
  return j;
}

Jet& Jet::operator+=(const Jet& o) {
  value_ += o.value_;
  for (std::size_t i = 0; i < first_.size(); ++i) first_[i] += o.first_[i];
  for (std::size_t i = 0; i < second_.size(); ++i) second_[i] += o.second_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  value_ -= o.value_;
  for (std::size_t i = 0; i < first_.size(); ++i) first_[i] -= o.first_[i];
  for (std::size_t i = 0; i < second_.size(); ++i) second_[i] -= o.second_[i];
  return *this;
}

Jet& Jet::operator*=(cplx s) {
  value_ *= s;
  for (auto& d : first_) d *= s;
  for (auto& d : second_) d *= s;
  return *this;
}

Jet operator-(const Jet& a) {
  Jet r = a;
  r *= -1.0;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  Jet r(a.value_ * b.value_, n, a.order_ < b.order_ ? a.order_ : b.order_);
  for (std::size_t i = 0; i < n; ++i) r.first_[i] = a.value_ * b.first_[i] + b.value_ * a.first_[i];
  if (r.order_ >= 2) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const cplx v = a.value_ * b.second_[i * n + j] + b.value_ * a.second_[i * n + j] +
                       a.first_[i] * b.first_[j] + a.first_[j] * b.first_[i];
        r.second_[i * n + j] = v;
        r.second_[j * n + i] = v;
      }
    }
  }
  return r;
}

Jet Jet::compose(cplx f, cplx df, cplx d2f) const {
  const std::size_t n = size();
  Jet r(f, n, order_);
  for (std::size_t i = 0; i < n; ++i) r.first_[i] = df * first_[i];
  if (order_ >= 2) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const cplx v = df * second_[i * n + j] + d2f * first_[i] * first_[j];
        r.second_[i * n + j] = v;
        r.second_[j * n + i] = v;
      }
    }
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  const cplx inv = 1.0 / b.value();
  return a * b.compose(inv, -inv * inv, 2.0 * inv * inv * inv);
}

Jet exp_of(const Jet& a) {
  const cplx e = std::exp(a.value());
  return a.compose(e, e, e);
}

Jet pow_of(const Jet& a, unsigned n) {
  if (n == 0) return Jet(1.0, a.size(), a.order());
  if (n == 1) return a;
  const cplx v = a.value();
  const cplx pn2 = ipow(v, n - 2);
  const cplx pn1 = pn2 * v;
  const double dn = static_cast<double>(n);
  return a.compose(pn1 * v, dn * pn1, dn * (dn - 1.0) * pn2);
}

}  // namespace hm
