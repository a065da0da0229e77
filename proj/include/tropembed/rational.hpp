#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace tropembed {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// Parses "p/q", "p" or an exact decimal such as "-0.125". Throws ParseError.
Rational parse_rational(std::string_view text);

/// Canonical wire form: lowest terms, positive denominator, always "p/q".
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

int sign(const Rational& value);

BigInt floor(const Rational& value);
BigInt ceil(const Rational& value);

/// Largest k with 2^k <= value (value > 0).
long floor_log2(const Rational& value);

Rational pow2(long exponent);

std::int64_t gcd64(std::int64_t a, std::int64_t b) noexcept;

}  // namespace tropembed
