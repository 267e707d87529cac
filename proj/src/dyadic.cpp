#include "qtlab/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qtlab {

namespace {

// Shifts m left by k bits, throwing when the result would not fit.
std::int64_t shift_left(std::int64_t m, int k) {
  if (k == 0 || m == 0) return m;
  if (k >= 62) throw std::overflow_error("dyadic mantissa overflow");
  const std::int64_t limit = std::numeric_limits<std::int64_t>::max() >> k;
  if (m > limit || m < -limit) throw std::overflow_error("dyadic mantissa overflow");
  return m * (std::int64_t{1} << k);
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("dyadic mantissa overflow");
  return r;
}

}  // namespace

Dyadic::Dyadic(std::int64_t mantissa, int exponent) : mantissa_(mantissa), exponent_(exponent) {
  normalize();
}

void Dyadic::normalize() {
  if (mantissa_ == 0) {
    exponent_ = 0;
    return;
  }
  while ((mantissa_ & 1) == 0) {
    mantissa_ /= 2;
    ++exponent_;
  }
}

double Dyadic::to_double() const { return std::ldexp(static_cast<double>(mantissa_), exponent_); }

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (a.mantissa_ == 0) return b;
  if (b.mantissa_ == 0) return a;
  const int e = std::min(a.exponent_, b.exponent_);
  return Dyadic(checked_add(shift_left(a.mantissa_, a.exponent_ - e), shift_left(b.mantissa_, b.exponent_ - e)),
                e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + Dyadic(-b.mantissa_, b.exponent_); }

Dyadic operator*(const Dyadic& a, std::int64_t k) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a.mantissa_, k, &r)) throw std::overflow_error("dyadic mantissa overflow");
  return Dyadic(r, a.exponent_);
}

bool operator==(const Dyadic& a, const Dyadic& b) {
  return a.mantissa_ == b.mantissa_ && a.exponent_ == b.exponent_;
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  const Dyadic diff = a - b;
  return diff.mantissa_ <=> std::int64_t{0};
}

}  // namespace qtlab
