#include "polypen/fixed_point.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace polypen {

namespace {

std::int64_t narrow(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw FixedOverflow("fixed-point overflow");
  }
  return static_cast<std::int64_t>(v);
}

void require_same(const Fixed& a, const Fixed& b) {
  if (a.fraction_bits() != b.fraction_bits()) {
    throw ValidationError("fraction_bits", "mixed fixed-point formats");
  }
}

}  // namespace

Fixed Fixed::from_double(double v, int fraction_bits) {
  if (fraction_bits < 1 || fraction_bits > 62) {
    throw ValidationError("fraction_bits", "must be in [1, 62]");
  }
  const double scaled = std::nearbyint(std::ldexp(v, fraction_bits));
  if (!std::isfinite(scaled) || std::abs(scaled) >= 0x1.0p63) {
    throw FixedOverflow("value " + std::to_string(v) + " does not fit the fixed-point format");
  }
  return {static_cast<std::int64_t>(scaled), fraction_bits};
}

double Fixed::to_double() const noexcept { return std::ldexp(static_cast<double>(raw_), -frac_); }

Fixed operator+(const Fixed& a, const Fixed& b) {
  require_same(a, b);
  return {narrow(static_cast<__int128>(a.raw_) + b.raw_), a.frac_};
}

Fixed operator-(const Fixed& a, const Fixed& b) {
  require_same(a, b);
  return {narrow(static_cast<__int128>(a.raw_) - b.raw_), a.frac_};
}

Fixed operator*(const Fixed& a, const Fixed& b) {
  require_same(a, b);
  const __int128 prod = static_cast<__int128>(a.raw_) * b.raw_;
  const __int128 half = static_cast<__int128>(1) << (a.frac_ - 1);
  return {narrow((prod + half) >> a.frac_), a.frac_};
}

Fixed operator*(const Fixed& a, double c) { return a * Fixed::from_double(c, a.frac_); }

}  // namespace polypen
