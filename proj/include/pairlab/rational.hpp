#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace pairlab {

/// Exact rational arithmetic used for measures, couplings and phases.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) { return Rational(num, den); }

inline BigInt floor_div(const BigInt& num, const BigInt& den) {
  BigInt q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

inline BigInt floor(const Rational& x) {
  return floor_div(boost::multiprecision::numerator(x), boost::multiprecision::denominator(x));
}

/// Fractional part {x} in [0, 1).
inline Rational frac(const Rational& x) { return x - Rational(floor(x)); }

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

/// "p/q" or "p" when the denominator is one.
std::string to_string(const Rational& x);

/// Parses "p", "p/q", or a finite decimal such as "-0.375" exactly.
Rational parse_rational(std::string_view text);

/// Best rational approximation with denominator at most max_den (continued fractions).
Rational nearest_rational(double x, std::int64_t max_den);

}  // namespace pairlab
