#pragma once

#include "haarshift/cyclotomic.hpp"

#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

namespace haarshift {

/// Thrown when an enumeration would exceed its configured size cap.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Element of a finite abelian group, one residue per cyclic factor.
/// Coordinates are always kept reduced into [0, n_i); elements only make
/// sense relative to the group that produced them.
struct GroupElement {
  std::vector<std::int64_t> coords;

  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

class Subgroup;

/// A finite abelian group presented in primary decomposition: a product of
/// cyclic factors of prime-power order, sorted by (prime, exponent).
/// Composite factor orders passed to make() are split by the Chinese
/// remainder theorem, so equal abstract groups always canonicalize to the
/// same factor list. Copies are cheap (shared immutable state).
///
/// The character group is identified with the group itself throughout: a
/// dual element is a GroupElement of the same shape, and the root-of-unity
/// field for character values (conductor = exponent of the group) is built
/// eagerly and shared.
class FiniteAbelianGroup {
 public:
  /// Builds the group Z(orders[0]) x ... x Z(orders[k-1]) in canonical form.
  /// Orders must be >= 1; factors of order 1 are dropped (the empty product
  /// is the trivial group).
  static FiniteAbelianGroup make(const std::vector<std::int64_t>& orders);

  const std::vector<std::int64_t>& orders() const;
  std::size_t factor_count() const;
  std::uint64_t order() const;
  /// Least common multiple of the factor orders (1 for the trivial group).
  std::int64_t exponent() const;
  bool trivial() const;
  /// True when no factor has even order, i.e. the group has no 2-torsion.
  bool odd_order() const;

  /// Shared cyclotomic field of conductor exponent(); character values live
  /// here.
  const FieldPtr& field() const;

  GroupElement zero() const;
  /// Validates the coordinate count and reduces each residue; accepts any
  /// int64 coordinates.
  GroupElement element(std::vector<std::int64_t> coords) const;
  GroupElement add(const GroupElement& a, const GroupElement& b) const;
  GroupElement sub(const GroupElement& a, const GroupElement& b) const;
  GroupElement neg(const GroupElement& a) const;
  GroupElement scale(std::int64_t k, const GroupElement& a) const;
  std::int64_t element_order(const GroupElement& a) const;

  /// Mixed-radix index of an element, in [0, order()). Rank order coincides
  /// with lexicographic order on coordinates, which fixes the iteration
  /// order used everywhere (reports, witnesses, enumeration).
  std::uint64_t rank_of(const GroupElement& a) const;
  GroupElement element_at(std::uint64_t rank) const;

  /// Structural equality: same canonical factor list.
  friend bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b);
  friend bool operator!=(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b);

 private:
  struct Data;
  explicit FiniteAbelianGroup(std::shared_ptr<const Data> data);
  std::shared_ptr<const Data> data_;

  friend class Subgroup;
};

/// Subgroup of a fixed parent group, stored extensionally as the sorted list
/// of member ranks plus a small generating set (kept for reporting and for
/// linear-time membership tests against homomorphic images).
class Subgroup {
 public:
  static Subgroup trivial_subgroup(const FiniteAbelianGroup& parent);
  static Subgroup full_subgroup(const FiniteAbelianGroup& parent);

  /// Builds a subgroup from an explicit element list after verifying closure
  /// (zero present, closed under addition). Throws std::invalid_argument if
  /// the set is not a subgroup.
  static Subgroup from_elements(const FiniteAbelianGroup& parent,
                                const std::vector<GroupElement>& elements);

  const FiniteAbelianGroup& parent() const { return parent_; }
  std::uint64_t size() const { return ranks_.size(); }
  /// Sorted member ranks (ascending).
  const std::vector<std::uint64_t>& ranks() const { return ranks_; }
  /// A minimal generating set, chosen greedily by descending element order
  /// with rank as tie-break; empty exactly for the trivial subgroup.
  const std::vector<GroupElement>& generators() const { return generators_; }

  bool contains(const GroupElement& x) const;
  bool contains_rank(std::uint64_t rank) const;
  std::vector<GroupElement> elements() const;

  friend bool operator==(const Subgroup& a, const Subgroup& b);
  friend bool operator!=(const Subgroup& a, const Subgroup& b);
  /// Lexicographic on the rank lists; total order used for canonical
  /// reporting of subgroup families.
  friend bool operator<(const Subgroup& a, const Subgroup& b);

 private:
  Subgroup(FiniteAbelianGroup parent, std::vector<std::uint64_t> ranks,
           std::vector<GroupElement> generators);

  FiniteAbelianGroup parent_;
  std::vector<std::uint64_t> ranks_;
  std::vector<GroupElement> generators_;

  friend Subgroup subgroup_generated(const FiniteAbelianGroup&, const std::vector<GroupElement>&);
  friend std::vector<Subgroup> enumerate_subgroups(const FiniteAbelianGroup&, std::uint64_t);
  friend Subgroup subgroup_from_closed_ranks(const FiniteAbelianGroup&,
                                             std::vector<std::uint64_t>);
};

/// Closure of a generating set. Cost is linear in the size of the result.
Subgroup subgroup_generated(const FiniteAbelianGroup& g, const std::vector<GroupElement>& gens);

/// All subgroups of g, sorted canonically. The lattice is produced per prime
/// component and combined across primes (every subgroup splits as a product
/// of its primary parts). Throws CapExceeded when order() > cap, or when the
/// number of subgroups itself becomes unreasonable (beyond 200000).
std::vector<Subgroup> enumerate_subgroups(const FiniteAbelianGroup& g, std::uint64_t cap = 4096);

/// Internal-trust constructor for rank sets already known to be closed
/// (annihilators, homomorphic images, kernels). Verifies nothing beyond
/// sortedness; computes generators.
Subgroup subgroup_from_closed_ranks(const FiniteAbelianGroup& g, std::vector<std::uint64_t> ranks);

/// The subgroup {2x : x in g}; equals g exactly when g has odd order.
Subgroup doubling_image(const FiniteAbelianGroup& g);

/// The subgroup {x : 2x = 0}; trivial exactly when g has odd order.
Subgroup two_torsion(const FiniteAbelianGroup& g);

/// Quotient g/k in canonical form, with explicit coordinate maps in both
/// directions. The projection matrix is a valid homomorphism matrix row set;
/// the section picks one preimage per quotient basis vector (it is a right
/// inverse of the projection, not a homomorphic splitting in general).
struct QuotientDecomposition {
  FiniteAbelianGroup parent;
  FiniteAbelianGroup quotient;
  /// projection[t][j] maps parent coordinate j into quotient factor t.
  std::vector<std::vector<std::int64_t>> projection;
  /// section[j][t] lifts quotient factor t into parent coordinate j.
  std::vector<std::vector<std::int64_t>> section;

  GroupElement project(const GroupElement& x) const;
  GroupElement lift(const GroupElement& q) const;
};

/// Computes g/k via the invariant-factor decomposition of the relation
/// lattice spanned by the factor orders and the subgroup generators.
/// Satisfies |quotient| * |k| = |g|, project(section(e)) = e and
/// project(x) = 0 exactly for x in k.
QuotientDecomposition quotient(const FiniteAbelianGroup& g, const Subgroup& k);

}  // namespace haarshift
