#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_support.hpp"

#include "haarshift/arith.hpp"

#include <map>

using namespace haarshift;

namespace {

// Independent order formula for Aut of a finite abelian group, computed per
// prime from the partition of exponents (Hillar-Rhea shape): with exponents
// e_1 <= ... <= e_n, d_k = max{l : e_l = e_k}, c_k = min{l : e_l = e_k},
//   |Aut| = prod_k (p^{d_k} - p^{k-1})
//         * prod_j p^{e_j (n - d_j)}
//         * prod_i p^{(e_i - 1)(n - c_i + 1)}.
Int automorphism_count(const FiniteAbelianGroup& g) {
  std::map<std::int64_t, std::vector<int>> exps_by_prime;
  for (std::int64_t order : g.orders()) {
    const auto f = factorize(order);
    REQUIRE(f.size() == 1);
    exps_by_prime[f[0].first].push_back(f[0].second);
  }
  Int total = 1;
  for (auto& [p, exps] : exps_by_prime) {
    std::sort(exps.begin(), exps.end());
    const std::size_t n = exps.size();
    const auto ppow = [&](std::int64_t e) {
      Int r;
      mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p),
                    static_cast<unsigned long>(e));
      return r;
    };
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t d = k;
      while (d + 1 < n && exps[d + 1] == exps[k]) ++d;
      std::size_t c = k;
      while (c > 0 && exps[c - 1] == exps[k]) --c;
      total *= ppow(static_cast<std::int64_t>(d + 1)) - ppow(static_cast<std::int64_t>(k));
      total *= ppow(exps[k] * static_cast<std::int64_t>(n - (d + 1)));
      total *= ppow((exps[k] - 1) * static_cast<std::int64_t>(n - c));
    }
  }
  return total;
}

}  // namespace

TEST_CASE("automorphism enumeration matches the independent order formula") {
  auto groups = testsupport::catalog();
  groups.push_back(FiniteAbelianGroup::make({6}));
  groups.push_back(FiniteAbelianGroup::make({2, 4, 8}));
  for (const auto& g : groups) {
    const auto autos = enumerate_automorphisms(g, 4096);
    CHECK(Int(static_cast<unsigned long>(autos.size())) == automorphism_count(g));
    bool has_identity = false;
    for (std::size_t i = 0; i < autos.size(); ++i) {
      CHECK(is_automorphism(autos[i]));
      if (autos[i] == Homomorphism::identity(g)) has_identity = true;
      for (std::size_t j = i + 1; j < autos.size() && j < i + 5; ++j) {
        CHECK(autos[i] != autos[j]);
      }
    }
    CHECK(has_identity);
    // Deterministic order.
    const auto again = enumerate_automorphisms(g, 4096);
    REQUIRE(again.size() == autos.size());
    for (std::size_t i = 0; i < autos.size(); ++i) CHECK(again[i] == autos[i]);
  }
}

TEST_CASE("sampling finds distinct automorphisms deterministically") {
  const auto g = FiniteAbelianGroup::make({2, 2, 2, 2, 2, 2});
  const auto s1 = sample_automorphisms(g, 20, 5);
  const auto s2 = sample_automorphisms(g, 20, 5);
  REQUIRE(s1.size() == 20);
  REQUIRE(s2.size() == 20);
  for (std::size_t i = 0; i < s1.size(); ++i) {
    CHECK(is_automorphism(s1[i]));
    CHECK(s1[i] == s2[i]);
    for (std::size_t j = i + 1; j < s1.size(); ++j) CHECK(s1[i] != s1[j]);
  }
}

TEST_CASE("matrix validity is enforced against the factor orders") {
  const auto g = FiniteAbelianGroup::make({2, 4});
  // Sending the order-2 generator into the order-4 factor with coefficient 1
  // is not a well-defined map.
  CHECK_THROWS_AS(Homomorphism::make(g, g, {{0, 0}, {1, 0}}), std::invalid_argument);
  CHECK_NOTHROW(Homomorphism::make(g, g, {{0, 0}, {2, 0}}));
  CHECK_NOTHROW(Homomorphism::make(g, g, {{0, 1}, {0, 1}}));
  CHECK_THROWS_AS(Homomorphism::make(g, g, {{0}, {0}}), std::invalid_argument);

  // Entries reduce modulo the codomain factor order, so equal maps compare
  // equal.
  CHECK(Homomorphism::make(g, g, {{3, 0}, {0, 5}}) ==
        Homomorphism::make(g, g, {{1, 0}, {0, 1}}));
  CHECK(Homomorphism::scalar(g, 5) == Homomorphism::make(g, g, {{1, 0}, {0, 1}}));
  CHECK(Homomorphism::diagonal(g, {1, 3}).apply(g.element({1, 1})) == g.element({1, 3}));
}

TEST_CASE("composition, inversion and the adjoint satisfy the functor laws") {
  for (const auto& g : testsupport::catalog()) {
    const auto autos = testsupport::autos_for(g, 29);
    const Homomorphism id = Homomorphism::identity(g);
    for (std::size_t i = 0; i < autos.size(); ++i) {
      const Homomorphism& a = autos[i];
      CHECK(compose(a, invert(a)) == id);
      CHECK(compose(invert(a), a) == id);
      CHECK(adjoint(adjoint(a)) == a);
      const Homomorphism& b = autos[(i * 7 + 3) % autos.size()];
      CHECK(adjoint(compose(a, b)) == compose(adjoint(b), adjoint(a)));
      for (std::uint64_t r = 0; r < g.order(); r += 3) {
        const GroupElement x = g.element_at(r);
        CHECK(compose(a, b).apply(x) == a.apply(b.apply(x)));
        CHECK(hom_sum(a, b).apply(x) == g.add(a.apply(x), b.apply(x)));
      }
    }
    CHECK(adjoint(Homomorphism::scalar(g, 3)) == Homomorphism::scalar(g, 3));
  }
  const auto z4 = FiniteAbelianGroup::make({4});
  CHECK_THROWS_AS(invert(Homomorphism::scalar(z4, 2)), std::invalid_argument);
}

TEST_CASE("admissibility requires alpha and both offsets to be invertible") {
  const auto z5 = FiniteAbelianGroup::make({5});
  CHECK(is_admissible(Homomorphism::scalar(z5, 2)));
  CHECK(is_admissible(Homomorphism::scalar(z5, 3)));
  CHECK_FALSE(is_admissible(Homomorphism::scalar(z5, 1)));   // I - alpha = 0
  CHECK_FALSE(is_admissible(Homomorphism::scalar(z5, 4)));   // I + alpha = 0
  const auto z9 = FiniteAbelianGroup::make({9});
  // On a 3-group one of k-1, k, k+1 is divisible by 3, so no scalar works.
  for (std::int64_t k = 0; k < 9; ++k) {
    CHECK_FALSE(is_admissible(Homomorphism::scalar(z9, k)));
  }
  const auto z33 = FiniteAbelianGroup::make({3, 3});
  CHECK(is_admissible(Homomorphism::make(z33, z33, {{1, 1}, {1, 2}})));
  const auto z4 = FiniteAbelianGroup::make({4});
  for (std::int64_t k = 0; k < 4; ++k) {
    CHECK_FALSE(is_admissible(Homomorphism::scalar(z4, k)));  // even order
  }
  const auto [plus, minus] = id_plus_minus(Homomorphism::scalar(z5, 2));
  CHECK(plus == Homomorphism::scalar(z5, 3));
  CHECK(minus == Homomorphism::scalar(z5, -1));
}

TEST_CASE("images and kernels complement each other") {
  for (const auto& g : testsupport::catalog()) {
    for (std::int64_t k = 0; k < 6; ++k) {
      const Homomorphism f = Homomorphism::scalar(g, k);
      const Subgroup im = image_subgroup(f);
      const Subgroup ker = kernel_subgroup(f);
      CHECK(im.size() * ker.size() == g.order());
      for (const auto& x : ker.elements()) CHECK(f.apply(x) == g.zero());
      for (const auto& x : im.elements()) {
        bool hit = false;
        for (std::uint64_t r = 0; r < g.order() && !hit; ++r) {
          if (f.apply(g.element_at(r)) == x) hit = true;
        }
        CHECK(hit);
      }
    }
  }
  const auto z8 = FiniteAbelianGroup::make({8});
  CHECK(image_subgroup(Homomorphism::scalar(z8, 2)).ranks() ==
        std::vector<std::uint64_t>{0, 2, 4, 6});
  CHECK(image_of_subgroup(Homomorphism::scalar(z8, 2), Subgroup::full_subgroup(z8)).size() == 4);
}

TEST_CASE("subgroup embeddings give faithful coordinates") {
  for (const auto& g : testsupport::catalog()) {
    for (const auto& k : enumerate_subgroups(g)) {
      const SubgroupEmbedding emb = subgroup_structure(k);
      CHECK(emb.abstract_group.order() == k.size());
      for (std::uint64_t r = 0; r < emb.abstract_group.order(); ++r) {
        const GroupElement a = emb.abstract_group.element_at(r);
        const GroupElement x = emb.to_parent(a);
        CHECK(k.contains(x));
        CHECK(emb.from_parent(x) == a);
      }
      // The embedding is additive.
      const GroupElement a1 = emb.abstract_group.element_at(0);
      const GroupElement a2 = emb.abstract_group.element_at(k.size() / 2);
      CHECK(emb.to_parent(emb.abstract_group.add(a1, a2)) ==
            g.add(emb.to_parent(a1), emb.to_parent(a2)));
    }
  }
}

TEST_CASE("restriction and quotient maps commute with the originals") {
  const auto z8 = FiniteAbelianGroup::make({8});
  const Homomorphism a = Homomorphism::scalar(z8, 3);
  const Subgroup k = image_subgroup(Homomorphism::scalar(z8, 2));
  const SubgroupEmbedding emb = subgroup_structure(k);
  const Homomorphism r = restrict_to(a, emb);
  for (const auto& x : k.elements()) {
    CHECK(r.apply(emb.from_parent(x)) == emb.from_parent(a.apply(x)));
  }

  const QuotientDecomposition q = quotient(z8, k);
  const Homomorphism ind = induced_on_quotient(a, q);
  for (std::uint64_t rr = 0; rr < z8.order(); ++rr) {
    const GroupElement x = z8.element_at(rr);
    CHECK(ind.apply(q.project(x)) == q.project(a.apply(x)));
  }

  // A line that is not invariant cannot be restricted to, and the quotient
  // by it does not receive the map.
  const auto z33 = FiniteAbelianGroup::make({3, 3});
  const Homomorphism rot = Homomorphism::make(z33, z33, {{0, 1}, {1, 1}});
  const Subgroup line = subgroup_generated(z33, {z33.element({1, 0})});
  CHECK_THROWS_AS(restrict_to(rot, line), std::domain_error);
  CHECK_THROWS_AS(induced_on_quotient(rot, quotient(z33, line)), std::domain_error);
}

TEST_CASE("projections are homomorphisms with the subgroup as kernel") {
  for (const auto& g : testsupport::catalog()) {
    for (const auto& k : enumerate_subgroups(g)) {
      const Homomorphism p = projection_hom(quotient(g, k));
      CHECK(kernel_subgroup(p) == k);
      CHECK(image_subgroup(p).size() == g.order() / k.size());
    }
  }
}
