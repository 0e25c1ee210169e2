#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace hm {

using cplx = std::complex<double>;

/// Integer power by repeated squaring; std::pow(complex, int) may go through
/// the complex logarithm.
inline cplx ipow(cplx base, unsigned n) {
  cplx result = 1.0;
  while (n > 0) {
    if (n & 1u) result *= base;
    base *= base;
    n >>= 1u;
  }
  return result;
}

/// Truncated Taylor jet of a holomorphic quantity: value, first partials and
/// (for order 2) the symmetric matrix of second partials with respect to a
/// fixed list of n independent complex variables.
///
/// Second partials are stored row-major; every operation computes the upper
/// triangle and mirrors it, so symmetry is exact rather than approximate.
class Jet {
 public:
  Jet() = default;

  /// Constant jet (all derivative parts zero).
  Jet(cplx value, std::size_t n, int order);

  static Jet variable(cplx value, std::size_t index, std::size_t n, int order);

  cplx value() const { return value_; }
  std::size_t size() const { return first_.size(); }
  int order() const { return order_; }

  cplx first(std::size_t i) const { return first_[i]; }
  cplx second(std::size_t i, std::size_t j) const { return second_[i * size() + j]; }
  const std::vector<cplx>& first() const { return first_; }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(cplx s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(const Jet& a);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator*(Jet a, cplx s) { return a *= s; }
  friend Jet operator*(cplx s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, cplx s) {
    a.value_ += s;
    return a;
  }
  friend Jet operator-(Jet a, cplx s) {
    a.value_ -= s;
    return a;
  }

  /// Applies a scalar holomorphic function through its value, first and second
  /// derivative at the jet's value (chain rule to second order).
  Jet compose(cplx f, cplx df, cplx d2f) const;

 private:
  cplx value_{};
  std::vector<cplx> first_;
  std::vector<cplx> second_;
  int order_ = 0;
};

Jet exp_of(const Jet& a);
Jet pow_of(const Jet& a, unsigned n);
inline bool vanishes(const Jet& a) { return a.value() == cplx{}; }

}  // namespace hm
