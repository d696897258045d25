#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace haarshift {

/// Prime factorization by trial division, pairs (p, multiplicity) with p
/// ascending. Requires n >= 1; the result is empty for n = 1.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

/// Euler totient. Requires n >= 1.
std::int64_t euler_phi(std::int64_t n);

/// All positive divisors of n in ascending order. Requires n >= 1.
std::vector<std::int64_t> divisors(std::int64_t n);

/// Modular inverse of a modulo m. Requires m >= 1 and gcd(a, m) = 1.
std::int64_t mod_inverse(std::int64_t a, std::int64_t m);

/// x^e mod m without overflow for m < 2^31. Requires e >= 0, m >= 1.
std::int64_t mod_pow(std::int64_t x, std::int64_t e, std::int64_t m);

}  // namespace haarshift
