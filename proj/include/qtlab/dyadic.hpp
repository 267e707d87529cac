#pragma once

#include <cstdint>
#include <compare>

namespace qtlab {

/// Exact dyadic rational mantissa * 2^exponent with a 64-bit mantissa.
/// Arithmetic throws std::overflow_error instead of rounding.
class Dyadic {
 public:
  constexpr Dyadic() = default;
  Dyadic(std::int64_t mantissa, int exponent);

  static Dyadic integer(std::int64_t v) { return Dyadic(v, 0); }
  /// 2^e.
  static Dyadic pow2(int e) { return Dyadic(1, e); }

  std::int64_t mantissa() const { return mantissa_; }
  int exponent() const { return exponent_; }

  /// Nearest double; exact whenever |mantissa| < 2^53 and the exponent is in range.
  double to_double() const;

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, std::int64_t k);
  friend bool operator==(const Dyadic& a, const Dyadic& b);
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

 private:
  void normalize();
  std::int64_t mantissa_ = 0;
  int exponent_ = 0;
};

}  // namespace qtlab
