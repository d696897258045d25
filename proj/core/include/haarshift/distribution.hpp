#pragma once

#include "haarshift/group.hpp"

#include <optional>
#include <utility>

namespace haarshift {

/// Exact probability distribution on a finite abelian group: one rational
/// mass per element, indexed by rank. Construction validates nonnegativity
/// and total mass 1; every operation below preserves both exactly.
class Distribution {
 public:
  Distribution(FiniteAbelianGroup group, RationalVector masses);

  const FiniteAbelianGroup& group() const { return group_; }
  const RationalVector& masses() const { return masses_; }
  const Rational& mass(const GroupElement& x) const;
  const Rational& mass_at_rank(std::uint64_t rank) const;

  friend bool operator==(const Distribution& a, const Distribution& b);
  friend bool operator!=(const Distribution& a, const Distribution& b) { return !(a == b); }

 private:
  FiniteAbelianGroup group_;
  RationalVector masses_;
};

/// Normalized counting measure on the whole group.
Distribution haar(const FiniteAbelianGroup& g);

/// Normalized counting measure on a subgroup.
Distribution haar_on_subgroup(const Subgroup& k);

/// Point mass at x.
Distribution dirac(const FiniteAbelianGroup& g, const GroupElement& x);

/// Pushforward along translation by s.
Distribution shift(const Distribution& mu, const GroupElement& s);

/// Pushforward along negation.
Distribution reflect(const Distribution& mu);

/// Distribution of the sum of independent draws.
Distribution convolve(const Distribution& a, const Distribution& b);

/// Elements of positive mass, in rank order.
std::vector<GroupElement> support(const Distribution& mu);

/// Smallest subgroup containing both supports.
Subgroup minimal_carrier_subgroup(const Distribution& a, const Distribution& b);

struct HaarShiftDecomposition {
  Subgroup subgroup;
  /// The least-rank element of the supporting coset.
  GroupElement shift;
};

/// Recognizes mu as the Haar measure of a subgroup translated by a shift.
/// The witness is canonical: the subgroup is determined by mu and the shift
/// is the least-rank support element. Returns nullopt when the support is
/// not a coset or the masses are not uniform on it.
std::optional<HaarShiftDecomposition> is_haar_shift(const Distribution& mu);

/// Deterministic pseudo-random distribution: draws one integer weight per
/// element uniformly from [0, denominator_bound] using mt19937_64 seeded as
/// given (consumed in rank order), redrawing the whole vector in the
/// measure-zero case that every weight is 0, then normalizes. Equal seeds
/// give equal distributions across platforms. Requires denominator_bound >= 1.
Distribution random_distribution(const FiniteAbelianGroup& g, std::uint64_t seed,
                                 std::uint64_t denominator_bound);

/// Convex combination. Weights must be nonnegative and sum to 1; all
/// components must live on the same group.
Distribution mix(const std::vector<std::pair<Rational, Distribution>>& components);

/// Stable derivation of per-instance seeds from a base seed (splitmix64 on
/// the pair). Used by sweep drivers so trial k of a run is reproducible in
/// isolation.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace haarshift
