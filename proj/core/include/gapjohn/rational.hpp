#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace gapjohn {

using Integer = mpz_class;
using Rational = mpq_class;

// Parses "p", "p/q" or a decimal literal such as "1.25" into a canonical
// rational.  Throws ParseError on malformed input or zero denominators.
Rational parse_rational(std::string_view text);

// num / den in lowest terms.  Throws PreconditionError for den = 0.
Rational fraction(const Integer& num, const Integer& den);

// Canonical "p/q" text, or "p" when the denominator is one.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);
// Nearest integer, ties rounded up.
Integer round_nearest(const Rational& q);

// Narrowing with an OverflowError instead of silent truncation.
std::int64_t to_int64(const Integer& z);
std::int64_t floor_to_int64(const Rational& q);

Rational pow(const Rational& base, unsigned exponent);

// Smallest rational of the form k / 2^bits that is >= sqrt(q) (q >= 0).
// The result is exact in the sense that r*r >= q is verified.
Rational sqrt_upper(const Rational& q, unsigned bits = 40);
// Largest rational of the form k / 2^bits that is <= sqrt(q).
Rational sqrt_lower(const Rational& q, unsigned bits = 40);

// Rational with denominator 2^bits closest to x, rounding toward -inf.
Rational rational_from_double(double x, unsigned bits = 40);

}  // namespace gapjohn
