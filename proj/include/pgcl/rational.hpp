#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace pgcl {

/// Exact rational in canonical form (positive denominator, lowest terms).
using Rational = mpq_class;
/// Arbitrary-precision natural / integer.
using Natural = mpz_class;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Builds a canonical rational from numerator/denominator.
Rational make_rational(const Natural& num, const Natural& den);
inline Rational make_rational(long num, long den) {
  return make_rational(Natural(num), Natural(den));
}

/// "num/den", always with an explicit denominator ("0/1", "3/1").
std::string to_string(const Rational& q);

/// Accepts "n", "n/m", "-n/m" and decimals "1.25". Throws Error on junk or a
/// zero denominator.
Rational parse_rational(std::string_view text);

/// Decimal rendering truncated toward zero after `digits` fractional digits.
std::string to_decimal(const Rational& q, int digits = 20);

double to_double(const Rational& q);

Rational floor_of(const Rational& q);

/// 2^k as an exact rational.
Rational pow2(long k);

Natural to_natural(std::uint64_t v);
/// Throws Error if the value does not fit.
std::uint64_t to_u64(const Natural& n);
bool fits_u64(const Natural& n);

}  // namespace pgcl
