#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace haarshift {

/// Arbitrary-precision integer. All arithmetic in the library that can leave
/// the int64 range goes through this type.
using Int = mpz_class;

/// Exact rational number, always kept in lowest terms with positive
/// denominator (gmp canonicalizes on construction and after arithmetic).
using Rational = mpq_class;

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<std::vector<Rational>>;
using IntMatrix = std::vector<std::vector<Int>>;

/// Renders a rational as "p/q", or just "p" when the denominator is 1.
/// This is the canonical serialization used in scenario files and reports.
std::string rational_to_string(const Rational& r);

/// Parses "p", "-p" or "p/q". Returns nullopt on malformed input or on a
/// zero denominator. Whitespace is not accepted.
std::optional<Rational> parse_rational(const std::string& text);

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline int sign(const Rational& r) { return sgn(r); }

}  // namespace haarshift
