#pragma once

#include "haarshift/group.hpp"

#include <utility>

namespace haarshift {

/// Homomorphism between finite abelian groups in coordinates: an integer
/// matrix a with rows indexed by codomain factors and columns by domain
/// factors, acting as y_i = sum_j a[i][j] * x_j mod n_i.
///
/// Such a matrix is a valid map exactly when a[i][j] is divisible by
/// n_i / gcd(n_i, m_j) for every entry (n_i the codomain factor order, m_j
/// the domain factor order); make() enforces this and keeps entries reduced
/// mod n_i, so equal maps have equal matrices.
class Homomorphism {
 public:
  static Homomorphism make(FiniteAbelianGroup domain, FiniteAbelianGroup codomain,
                           std::vector<std::vector<std::int64_t>> matrix);
  static Homomorphism identity(const FiniteAbelianGroup& g);
  static Homomorphism zero_map(FiniteAbelianGroup domain, FiniteAbelianGroup codomain);
  /// Multiplication by k on every factor.
  static Homomorphism scalar(const FiniteAbelianGroup& g, std::int64_t k);
  /// Multiplication by per_factor[i] on factor i.
  static Homomorphism diagonal(const FiniteAbelianGroup& g,
                               const std::vector<std::int64_t>& per_factor);

  const FiniteAbelianGroup& domain() const { return domain_; }
  const FiniteAbelianGroup& codomain() const { return codomain_; }
  const std::vector<std::vector<std::int64_t>>& matrix() const { return matrix_; }
  bool is_endomorphism() const { return domain_ == codomain_; }

  GroupElement apply(const GroupElement& x) const;

  friend bool operator==(const Homomorphism& a, const Homomorphism& b);
  friend bool operator!=(const Homomorphism& a, const Homomorphism& b) { return !(a == b); }

 private:
  Homomorphism(FiniteAbelianGroup domain, FiniteAbelianGroup codomain,
               std::vector<std::vector<std::int64_t>> matrix);

  FiniteAbelianGroup domain_;
  FiniteAbelianGroup codomain_;
  std::vector<std::vector<std::int64_t>> matrix_;
};

/// Composition f after g (domains must chain).
Homomorphism compose(const Homomorphism& f, const Homomorphism& g);

/// Pointwise sum of parallel maps.
Homomorphism hom_sum(const Homomorphism& f, const Homomorphism& g);

/// Injectivity scan over the whole domain; for endomorphisms of finite
/// groups this settles bijectivity. Requires an endomorphism.
bool is_automorphism(const Homomorphism& f);

/// Inverse of an automorphism, computed from the full value table and
/// certified by composing back to the identity. Throws std::invalid_argument
/// if f is not an automorphism.
Homomorphism invert(const Homomorphism& f);

/// The dual map between character groups, determined entrywise by
/// b[j][i] = a[i][j] * n_j / m_i (always integral for a valid matrix).
/// It satisfies (f(x), y) = (x, adjoint(f)(y)); the identity is re-verified
/// exhaustively after construction for small domains as a self-check.
Homomorphism adjoint(const Homomorphism& f);

/// The endomorphisms I + alpha and I - alpha.
std::pair<Homomorphism, Homomorphism> id_plus_minus(const Homomorphism& alpha);

/// True when alpha, I + alpha and I - alpha are all automorphisms.
bool is_admissible(const Homomorphism& alpha);

/// All automorphisms of g in deterministic (lexicographic image) order, via
/// backtracking over generator images with order and partial-subgroup-size
/// pruning. Throws CapExceeded when order() > cap or when the automorphism
/// count passes one million.
std::vector<Homomorphism> enumerate_automorphisms(const FiniteAbelianGroup& g,
                                                  std::uint64_t cap = 256);

/// Up to count distinct automorphisms found by seeded random column images;
/// intended for groups too large to enumerate. May return fewer when the
/// attempt budget runs out. Deterministic for fixed (count, seed).
std::vector<Homomorphism> sample_automorphisms(const FiniteAbelianGroup& g, std::size_t count,
                                               std::uint64_t seed);

Subgroup image_subgroup(const Homomorphism& f);
Subgroup kernel_subgroup(const Homomorphism& f);
Subgroup image_of_subgroup(const Homomorphism& f, const Subgroup& k);

/// Coordinates for a subgroup as a group in its own right. The abstract
/// side is produced from the quotient of the dual by the annihilator of k
/// (dual of a quotient is a subgroup), so no new machinery is needed, and
/// both directions are explicit.
struct SubgroupEmbedding {
  struct DualBasis {
    GroupElement dual_point;
    std::int64_t factor_order;
  };

  Subgroup subgroup;
  FiniteAbelianGroup abstract_group;
  /// Lookup table: abstract rank -> parent rank.
  std::vector<std::uint64_t> parent_rank_of;
  /// The dual-side basis elements used to read off abstract coordinates.
  std::vector<DualBasis> basis;

  /// Abstract coordinates -> element of the parent lying in the subgroup.
  GroupElement to_parent(const GroupElement& a) const;
  /// Element of the subgroup -> abstract coordinates.
  GroupElement from_parent(const GroupElement& x) const;
};

SubgroupEmbedding subgroup_structure(const Subgroup& k);

/// Restriction of an endomorphism to an invariant subgroup, expressed on the
/// abstract coordinates of the embedding. Throws std::domain_error when the
/// subgroup is not invariant under alpha.
Homomorphism restrict_to(const Homomorphism& alpha, const SubgroupEmbedding& embedding);
Homomorphism restrict_to(const Homomorphism& alpha, const Subgroup& k);

/// The map induced on a quotient by an endomorphism of the parent. Built by
/// lifting quotient basis vectors and certified by checking that it
/// commutes with the projection on every parent basis vector; throws
/// std::domain_error when alpha does not descend.
Homomorphism induced_on_quotient(const Homomorphism& alpha, const QuotientDecomposition& q);

/// The projection of a quotient decomposition as a Homomorphism.
Homomorphism projection_hom(const QuotientDecomposition& q);

}  // namespace haarshift
