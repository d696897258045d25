#pragma once

#include "haarshift/distribution.hpp"

namespace haarshift {

/// The character group of a finite abelian group is identified with the
/// group itself: the dual element y sends x to z^e where z is the primitive
/// root of unity of order exponent(g) and e = pairing_exponent(g, x, y).
using DualElement = GroupElement;

/// Exponent of the canonical bicharacter: sum over factors of
/// x_i * y_i * (N / n_i) mod N, with N = exponent(g). Bilinear and
/// nondegenerate.
std::int64_t pairing_exponent(const FiniteAbelianGroup& g, const GroupElement& x,
                              const DualElement& y);

/// The character value itself, in the group's shared cyclotomic field.
Cyclotomic pairing(const FiniteAbelianGroup& g, const GroupElement& x, const DualElement& y);

/// Annihilator A(Y, K) = { y : (x, y) = 1 for all x in K }, as a subgroup of
/// the dual. A(Y, {0}) is everything, A(Y, G) is trivial.
Subgroup annihilator(const FiniteAbelianGroup& g, const Subgroup& k);

/// The Fourier transform of a probability distribution, stored as one exact
/// cyclotomic value per dual element. Construction validates the two cheap
/// structural laws (value 1 at zero, conjugation under negation); the
/// modulus bound is exact but costs sign decisions, so it is a separate
/// check.
class CharacteristicFunction {
 public:
  CharacteristicFunction(FiniteAbelianGroup group, std::vector<Cyclotomic> values);

  const FiniteAbelianGroup& group() const { return group_; }
  const Cyclotomic& at(const DualElement& y) const;
  const Cyclotomic& at_rank(std::uint64_t rank) const;
  const std::vector<Cyclotomic>& values() const { return values_; }

  /// Verifies |f(y)|^2 <= 1 for every y, exactly (f(y) * conj(f(y)) is real;
  /// its sign against 1 is decided by the cyclotomic sign routine).
  bool modulus_bounded_by_one() const;

  /// True when every value is 0 or 1. Such transforms are exactly the
  /// indicators relevant to the Haar recognition results.
  bool values_in_zero_one() const;

  /// When values_in_zero_one(), the set {y : f(y) = 1}; it is a subgroup
  /// for transforms of subgroup Haar measures.
  std::vector<std::uint64_t> unit_ranks() const;

 private:
  FiniteAbelianGroup group_;
  std::vector<Cyclotomic> values_;
};

/// Fourier transform: f(y) = sum_x mu(x) * (x, y).
CharacteristicFunction char_fn(const Distribution& mu);

/// Inverse transform: mu(x) = (1/|G|) * sum_y f(y) * conj((x, y)). Throws
/// std::domain_error when the result is not a probability distribution
/// (non-rational, negative, or not summing to 1), which is how callers feed
/// it candidate transforms.
Distribution inverse_fourier(const CharacteristicFunction& f);

/// E(mu) = { y : (x, y) = 1 for all x in support(mu) }; always a subgroup,
/// and support(mu) lies inside the annihilator of E(mu) by construction.
Subgroup unit_set(const Distribution& mu);

}  // namespace haarshift
