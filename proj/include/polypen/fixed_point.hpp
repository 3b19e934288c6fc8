#pragma once

#include <cstdint>

#include "polypen/error.hpp"

namespace polypen {

class FixedOverflow : public NumericError {
public:
  using NumericError::NumericError;
};

// Signed 64-bit fixed-point number with a runtime number of fraction bits.
// Products round to nearest; any result outside the int64 range throws
// FixedOverflow.
class Fixed {
public:
  static Fixed from_double(double v, int fraction_bits);

  double to_double() const noexcept;
  std::int64_t raw() const noexcept { return raw_; }
  int fraction_bits() const noexcept { return frac_; }

  friend Fixed operator+(const Fixed& a, const Fixed& b);
  friend Fixed operator-(const Fixed& a, const Fixed& b);
  friend Fixed operator*(const Fixed& a, const Fixed& b);
  friend Fixed operator*(const Fixed& a, double c);

private:
  Fixed(std::int64_t raw, int frac) : raw_(raw), frac_(frac) {}

  std::int64_t raw_ = 0;
  int frac_ = 0;
};

}  // namespace polypen
