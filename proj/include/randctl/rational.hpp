#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace randctl {

// Arbitrary-precision integer; used for state counts and ownership encodings.
using BigInt = boost::multiprecision::cpp_int;

// Exact rational, kept in reduced form with positive denominator by the
// backing type.  All probabilities and game values in the library are exact.
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long num, long long den) {
  return Rational(BigInt(num), BigInt(den));
}

inline BigInt rat_num(const Rational& r) { return numerator(r); }
inline BigInt rat_den(const Rational& r) { return denominator(r); }

// "5/8" for proper fractions, "3" for integers.
std::string format_rational(const Rational& r);

// Accepts "a", "a/b" and exact decimal literals like "0.05" (= 1/20).
// Returns nullopt on malformed input or zero denominator.
std::optional<Rational> parse_rational(std::string_view text);

// Decimal rendering rounded to `digits` places (round half away from zero);
// parsing the result back is within 10^-digits/2 of the input.
std::string decimal_string(const Rational& r, int digits);

}  // namespace randctl
