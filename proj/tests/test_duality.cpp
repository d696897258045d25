#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_support.hpp"

#include <algorithm>

using namespace haarshift;

TEST_CASE("the pairing is bilinear, symmetric and nondegenerate") {
  auto groups = testsupport::catalog();
  groups.push_back(FiniteAbelianGroup::make({2, 2, 2, 2, 2, 2}));
  groups.push_back(FiniteAbelianGroup::make({2, 4, 8}));
  for (const auto& g : groups) {
    const std::int64_t n = g.exponent();
    testsupport::Rng rng(17);
    for (int t = 0; t < 40; ++t) {
      const GroupElement x = g.element_at(rng.below(g.order()));
      const GroupElement xp = g.element_at(rng.below(g.order()));
      const GroupElement y = g.element_at(rng.below(g.order()));
      const std::int64_t lhs = pairing_exponent(g, g.add(x, xp), y);
      const std::int64_t rhs = (pairing_exponent(g, x, y) + pairing_exponent(g, xp, y)) % n;
      CHECK(lhs == rhs);
      CHECK(pairing_exponent(g, x, y) == pairing_exponent(g, y, x));
    }
    // Nondegeneracy, exhaustively: only 0 pairs trivially with everything.
    for (std::uint64_t rx = 0; rx < g.order(); ++rx) {
      const GroupElement x = g.element_at(rx);
      bool all_trivial = true;
      for (std::uint64_t ry = 0; ry < g.order() && all_trivial; ++ry) {
        if (pairing_exponent(g, x, g.element_at(ry)) != 0) all_trivial = false;
      }
      CHECK(all_trivial == (rx == 0));
    }
  }
}

TEST_CASE("pairing values are the matching roots of unity") {
  const auto g = FiniteAbelianGroup::make({4, 3});
  for (std::uint64_t rx = 0; rx < g.order(); ++rx) {
    for (std::uint64_t ry = 0; ry < g.order(); ++ry) {
      const GroupElement x = g.element_at(rx);
      const GroupElement y = g.element_at(ry);
      CHECK(pairing(g, x, y) == root_of_unity(g.field(), pairing_exponent(g, x, y)));
    }
  }
}

TEST_CASE("annihilators have complementary size and invert by double duality") {
  for (const auto& g : testsupport::catalog()) {
    for (const auto& k : enumerate_subgroups(g)) {
      const Subgroup ann = annihilator(g, k);
      CHECK(ann.size() * k.size() == g.order());
      CHECK(annihilator(g, ann) == k);
      for (const auto& y : ann.elements()) {
        for (const auto& x : k.elements()) {
          CHECK(pairing_exponent(g, x, y) == 0);
        }
      }
    }
  }
}

TEST_CASE("the adjoint moves an endomorphism across the pairing") {
  for (const auto& g : testsupport::catalog()) {
    for (const auto& a : testsupport::autos_for(g, 23)) {
      const Homomorphism adj = adjoint(a);
      for (std::uint64_t rx = 0; rx < g.order(); ++rx) {
        const GroupElement x = g.element_at(rx);
        for (std::uint64_t ry = 0; ry < g.order(); ++ry) {
          const GroupElement y = g.element_at(ry);
          CHECK(pairing_exponent(g, a.apply(x), y) == pairing_exponent(g, x, adj.apply(y)));
        }
      }
    }
  }
}

TEST_CASE("subgroup Haar measures transform to annihilator indicators") {
  for (const auto& g : testsupport::catalog()) {
    for (const auto& k : enumerate_subgroups(g)) {
      const CharacteristicFunction f = char_fn(haar_on_subgroup(k));
      CHECK(f.values_in_zero_one());
      CHECK(f.unit_ranks() == annihilator(g, k).ranks());
    }
  }
}

TEST_CASE("transforms invert exactly on random distributions") {
  for (const auto& g : testsupport::catalog()) {
    for (std::uint64_t t = 0; t < 50; ++t) {
      const Distribution mu = random_distribution(g, derive_seed(31, t), 6);
      const CharacteristicFunction f = char_fn(mu);
      CHECK(f.at(g.zero()) == Cyclotomic::one(g.field()));
      CHECK(inverse_fourier(f) == mu);
    }
  }
}

TEST_CASE("transforms turn convolution into products and reflection into conjugation") {
  for (const auto& g : testsupport::catalog()) {
    for (std::uint64_t t = 0; t < 5; ++t) {
      const Distribution a = random_distribution(g, derive_seed(37, 2 * t), 5);
      const Distribution b = random_distribution(g, derive_seed(37, 2 * t + 1), 5);
      const CharacteristicFunction fa = char_fn(a);
      const CharacteristicFunction fb = char_fn(b);
      const CharacteristicFunction fc = char_fn(convolve(a, b));
      const CharacteristicFunction fr = char_fn(reflect(a));
      for (std::uint64_t r = 0; r < g.order(); ++r) {
        CHECK(fc.at_rank(r) == fa.at_rank(r) * fb.at_rank(r));
        CHECK(fr.at_rank(r) == fa.at_rank(r).conj());
      }
    }
  }
}

TEST_CASE("transform moduli are bounded by one") {
  for (const auto& g : {FiniteAbelianGroup::make({5}), FiniteAbelianGroup::make({2, 4}),
                        FiniteAbelianGroup::make({9})}) {
    for (std::uint64_t t = 0; t < 3; ++t) {
      CHECK(char_fn(random_distribution(g, derive_seed(41, t), 4)).modulus_bounded_by_one());
    }
    // Point masses transform to unit-modulus characters.
    const GroupElement x = g.element_at(1);
    const CharacteristicFunction f = char_fn(dirac(g, x));
    for (std::uint64_t r = 0; r < g.order(); ++r) {
      CHECK(f.at_rank(r) * f.at_rank(r).conj() == Cyclotomic::one(g.field()));
    }
    CHECK(f.modulus_bounded_by_one());
  }
}

TEST_CASE("the unit set annihilates the support") {
  for (const auto& g : testsupport::catalog()) {
    for (std::uint64_t t = 0; t < 10; ++t) {
      const Distribution mu = random_distribution(g, derive_seed(43, t), 3);
      const Subgroup e = unit_set(mu);
      for (const auto& x : support(mu)) {
        for (const auto& y : e.elements()) {
          CHECK(pairing_exponent(g, x, y) == 0);
        }
      }
    }
    for (const auto& k : enumerate_subgroups(g)) {
      CHECK(unit_set(haar_on_subgroup(k)) == annihilator(g, k));
    }
  }
}

TEST_CASE("non-distribution transforms are rejected on inversion") {
  const auto g = FiniteAbelianGroup::make({5});
  // Value -2 at the frequencies +-1 keeps the structural laws but pushes
  // the inverse outside the probability simplex.
  std::vector<Cyclotomic> vals;
  for (std::uint64_t r = 0; r < g.order(); ++r) {
    vals.push_back(r == 1 || r == 4 ? Cyclotomic::from_rational(g.field(), Rational(-2))
                                    : Cyclotomic::one(g.field()));
  }
  CHECK_THROWS_AS(inverse_fourier(CharacteristicFunction(g, std::move(vals))),
                  std::domain_error);
}
