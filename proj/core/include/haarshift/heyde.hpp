#pragma once

#include "haarshift/duality.hpp"
#include "haarshift/homomorphism.hpp"

#include <functional>
#include <optional>
#include <string>

namespace haarshift {

/// One symmetry-checking instance: independent distributions mu1, mu2 on a
/// common group, coupled through an automorphism alpha via the linear forms
/// L1 = x1 + x2 and L2 = x1 + alpha(x2).
struct HeydeInstance {
  FiniteAbelianGroup group;
  Homomorphism alpha;
  Distribution mu1;
  Distribution mu2;

  /// Throws std::invalid_argument unless both distributions and alpha live
  /// on the group and alpha is an automorphism.
  void validate() const;
};

enum class VerdictMethod { TransformEquation, JointDistribution };

struct SymmetryVerdict {
  bool symmetric = true;
  VerdictMethod method = VerdictMethod::TransformEquation;
  /// Present exactly when asymmetric. For the transform route this is the
  /// first dual pair (u, v), in scan order, whose product identity fails;
  /// for the joint route it is the least stored point (u, w) at which the
  /// joint law of (L1, L2) is not even in its second argument.
  std::optional<std::pair<GroupElement, GroupElement>> witness;
};

/// Decides conditional symmetry through the transform identity
///   f1(u+v) f2(u+Av) = f1(u-v) f2(u-Av)
/// over the full dual square (A the adjoint of alpha), with early exit at
/// the first failing pair. Exact cyclotomic arithmetic throughout.
SymmetryVerdict heyde_equation_holds(const HeydeInstance& inst);

/// Ground truth for the same question, computed without transforms: builds
/// the exact joint distribution of (L1, L2) sparsely from the supports and
/// tests evenness of L2 given L1 pointwise.
SymmetryVerdict conditional_symmetry_oracle(const HeydeInstance& inst);

/// Recomputes the transform identity at one dual pair from the raw
/// distributions, bypassing every cache; true when the identity holds
/// there. A failing verdict's witness must recheck false.
bool equation_witness_recheck(const HeydeInstance& inst, const DualElement& u,
                              const DualElement& v);

/// Recomputes the joint-law comparison at one point (u, w) from the raw
/// distributions; true when the two conditional masses agree there.
bool oracle_witness_recheck(const HeydeInstance& inst, const GroupElement& u,
                            const GroupElement& w);

struct EquivalenceDiscrepancy {
  std::size_t automorphism_index = 0;
  std::size_t trial_index = 0;
  bool equation_symmetric = false;
  bool oracle_symmetric = false;
};

struct EquivalenceReport {
  std::size_t instances = 0;
  std::size_t symmetric_count = 0;
  std::vector<EquivalenceDiscrepancy> discrepancies;

  bool consistent() const { return discrepancies.empty(); }
};

/// Supplies the distribution pair for a given trial index. Implementations
/// must be deterministic in the index.
using PairSource = std::function<std::pair<Distribution, Distribution>(std::size_t trial)>;

/// Runs both symmetry deciders over every (automorphism, trial) instance
/// and records each disagreement; jobs > 1 distributes instances over
/// threads without changing any result or its order.
EquivalenceReport equivalence_sweep(const FiniteAbelianGroup& g,
                                    const std::vector<Homomorphism>& automorphisms,
                                    const PairSource& pairs, std::size_t trials, int jobs = 1);

/// Exact test of the containment "doubling image inside the image of
/// I - alpha", which characterizes when the pair (haar, haar) passes the
/// transform identity for alpha. Requires an endomorphism.
bool haar_pair_equation_condition(const FiniteAbelianGroup& g, const Homomorphism& alpha);

/// Exact test of the containment K inside (I+alpha)^{-1}((I-alpha)(K)),
/// which plays the same role for the pair (haar on K, haar on K). Throws
/// std::domain_error when I + alpha is not an automorphism.
bool subgroup_haar_pair_condition(const Subgroup& k, const Homomorphism& alpha);

/// Exact test for shifted subgroup Haar pairs shift(haar(K), x1),
/// shift(haar(K), x2): requires alpha(K) = K and both I +- alpha
/// automorphisms (else std::domain_error), then decides 2(x1 + alpha x2)
/// in K.
bool shifted_haar_pair_condition(const Subgroup& k, const GroupElement& x1,
                                 const GroupElement& x2, const Homomorphism& alpha);

struct IndicatorSolutionOptions {
  std::uint64_t subgroup_cap = 4096;
  /// Subgroup indicators are checked by the quadratic dual-square scan up
  /// to this many (u, v) pairs, and by the equivalent linear membership
  /// criterion ("(I-A)v in E implies 2v in E") beyond it. Both are exact;
  /// their agreement is pinned by tests at small orders.
  std::uint64_t brute_force_pair_limit = std::uint64_t{1} << 20;
};

struct IndicatorSolutions {
  /// Solution subgroups of the dual, canonically sorted.
  std::vector<Subgroup> solutions;
  bool group_odd_order = false;
  bool alpha_admissible = false;
  bool used_fast_criterion = false;
};

/// Enumerates the subgroups E of the dual whose 0/1 indicator satisfies the
/// transform identity for alpha (any endomorphism is accepted, so
/// degenerate hypotheses can be explored). When the group has odd order and
/// alpha is admissible, every solution is additionally checked to be
/// invariant under the adjoint; a violation throws std::logic_error.
IndicatorSolutions enumerate_zero_one_solutions(const FiniteAbelianGroup& g,
                                                const Homomorphism& alpha,
                                                const IndicatorSolutionOptions& options = {});

struct RecognitionOptions {
  /// Run under failed hypotheses instead of throwing (results then carry no
  /// recognition guarantee and failures are informational).
  bool exploratory = false;
  /// Also run the converse sweep: every shifted subgroup Haar pair whose
  /// shift condition holds must come out symmetric.
  bool converse_sweep = true;
  int jobs = 1;
};

struct RecognitionReport {
  struct Failure {
    std::string family;  // "point-mass", "haar-shift", "provided", "converse"
    std::size_t index = 0;
    std::string reason;
  };

  bool hypotheses_hold = false;
  std::size_t pairs_checked = 0;
  std::size_t symmetric_pairs = 0;
  std::size_t asymmetric_pairs = 0;
  std::size_t recognized_decompositions = 0;
  std::size_t converse_pairs_checked = 0;
  std::vector<Failure> failures;

  bool all_assertions_hold() const { return failures.empty(); }
};

/// Structured verification of Haar recognition for symmetric instances:
/// over (a) all point-mass pairs, (b) all shifted subgroup Haar pairs from
/// the full subgroup lattice, and (c) caller-provided extra pairs (random
/// falsification probes, mixtures), asserts that every oracle-symmetric
/// pair decomposes as a common-subgroup Haar shift with alpha-invariant
/// subgroup and matching carrier, and (optionally) conversely that every
/// pair passing the shift condition is symmetric. Hypotheses (odd order,
/// admissible alpha) are guarded: violations throw std::domain_error unless
/// options.exploratory.
RecognitionReport verify_haar_recognition(const FiniteAbelianGroup& g, const Homomorphism& alpha,
                                          const PairSource& extra_pairs, std::size_t trials,
                                          const RecognitionOptions& options = {});

struct IterationReport {
  bool preconditions_hold = false;
  std::string precondition_failure;
  /// The two depth-1 factorization identities for f1 and f2.
  bool base_identities_hold = false;
  /// Multi-step expansions verified up to this depth (inclusive).
  int verified_depth = 0;
  bool expansions_hold = false;
  std::optional<DualElement> witness;
};

/// Checks the iterated factorization identities obtained by substituting
/// the transform identity into itself: at depth n, f1(y) and f2(y) expand
/// into products of 2^n transform values along monomial words in
/// (I+A)(I-A)^{-1}, 2A(I-A)^{-1} and 2(I-A)^{-1}. Preconditions: the
/// instance passes the transform identity, both transforms are real and
/// even, and I - A is an automorphism. Depth is clamped to [1, 10].
IterationReport iteration_identities_check(const HeydeInstance& inst, int depth);

enum class TowerCheck { Admissibility, IndicatorSolutions };

struct TowerLayer {
  int level = 0;
  std::vector<std::int64_t> orders;
  bool alpha_automorphism = false;
  bool plus_automorphism = false;
  bool minus_automorphism = false;
  /// Solution subgroups as sorted rank lists (TowerCheck::IndicatorSolutions).
  std::vector<std::vector<std::uint64_t>> solution_ranks;
};

struct TowerReport {
  std::vector<TowerLayer> layers;
  bool admissible_at_all_layers = false;
  /// Every solution at level m reduces (coordinatewise mod p^(m-1)) to a
  /// solution at level m-1.
  bool projections_consistent = true;
};

/// Sweeps the truncation tower over the given odd primes: level m is the
/// product of Z(p^m), with alpha acting as the given scalar on each
/// component (one scalar per prime, or a single broadcast scalar). Runs the
/// requested check at every level and verifies that indicator solutions are
/// consistent under the natural level-to-level reductions.
TowerReport truncation_tower_sweep(const std::vector<std::int64_t>& primes, int max_level,
                                   const std::vector<std::int64_t>& scalars, TowerCheck check,
                                   const IndicatorSolutionOptions& options = {});

}  // namespace haarshift
