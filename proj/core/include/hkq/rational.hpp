#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace hkq {

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator (GMP canonicalizes after every operation).
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p", "-p" or "p/q" with integer p, q (q != 0).
Rational parse_rational(std::string_view text);

/// Prints "p" for integers and "p/q" otherwise.
std::string to_string(const Rational& q);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_one(const Rational& q) { return q == 1; }

}  // namespace hkq
