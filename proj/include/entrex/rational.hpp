#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace entrex {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "p/q", integers, and decimals (with optional exponent) exactly.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Exact rational value of the shortest decimal representation of `x`,
/// so 0.1 becomes 1/10 rather than the binary double nearest to it.
Rational rational_from_double(double x);

double to_double(const Rational& r);

std::string to_string(const Rational& r);

/// gcd of two non-negative rationals (gcd(0, x) = x).
Rational rational_gcd(const Rational& a, const Rational& b);

}  // namespace entrex
