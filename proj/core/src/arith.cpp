#include "haarshift/arith.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace haarshift {

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("factorize: argument must be positive");
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t phi = 1;
  for (const auto& [p, e] : factorize(n)) {
    std::int64_t pe = p;
    for (int i = 1; i < e; ++i) pe *= p;
    phi *= pe - pe / p;
  }
  return phi;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("divisors: argument must be positive");
  std::vector<std::int64_t> out{1};
  for (const auto& [p, e] : factorize(n)) {
    const std::size_t base = out.size();
    std::int64_t pe = 1;
    for (int i = 0; i < e; ++i) {
      pe *= p;
      for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pe);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  if (m < 1) throw std::invalid_argument("mod_inverse: modulus must be positive");
  a %= m;
  if (a < 0) a += m;
  std::int64_t t = 0, new_t = 1, r = m, new_r = a;
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw std::invalid_argument("mod_inverse: argument not invertible");
  return t < 0 ? t + m : t;
}

std::int64_t mod_pow(std::int64_t x, std::int64_t e, std::int64_t m) {
  if (e < 0 || m < 1) throw std::invalid_argument("mod_pow: bad exponent or modulus");
  x %= m;
  if (x < 0) x += m;
  std::int64_t acc = 1 % m;
  while (e) {
    if (e & 1) acc = acc * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return acc;
}

}  // namespace haarshift
