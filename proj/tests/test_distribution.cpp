#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_support.hpp"

#include <numeric>

using namespace haarshift;

namespace {

Rational total_mass(const Distribution& mu) {
  Rational s = 0;
  for (const auto& m : mu.masses()) s += m;
  return s;
}

}  // namespace

TEST_CASE("construction enforces the probability simplex") {
  const auto g = FiniteAbelianGroup::make({3});
  CHECK_NOTHROW(Distribution(g, {Rational(1, 2), Rational(1, 2), Rational(0)}));
  CHECK_THROWS_AS(Distribution(g, {Rational(1, 2), Rational(1, 2), Rational(1, 2)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Distribution(g, {Rational(3, 2), Rational(-1, 2), Rational(0)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Distribution(g, {Rational(1), Rational(0)}), std::invalid_argument);
}

TEST_CASE("shift, reflect and convolve obey the group algebra") {
  for (const auto& g : testsupport::catalog()) {
    testsupport::Rng rng(47);
    for (std::uint64_t t = 0; t < 5; ++t) {
      const Distribution mu = random_distribution(g, derive_seed(53, t), 6);
      const Distribution nu = random_distribution(g, derive_seed(59, t), 6);
      const GroupElement a = g.element_at(rng.below(g.order()));
      const GroupElement b = g.element_at(rng.below(g.order()));

      CHECK(total_mass(mu) == 1);
      CHECK(shift(shift(mu, a), b) == shift(mu, g.add(a, b)));
      CHECK(shift(mu, g.zero()) == mu);
      CHECK(reflect(reflect(mu)) == mu);
      CHECK(convolve(mu, nu) == convolve(nu, mu));
      CHECK(convolve(mu, dirac(g, a)) == shift(mu, a));
      CHECK(convolve(convolve(mu, nu), dirac(g, b)) == convolve(mu, convolve(nu, dirac(g, b))));
      CHECK(convolve(haar(g), mu) == haar(g));
      CHECK(total_mass(convolve(mu, nu)) == 1);

      // Shift moves masses, reflect negates points.
      for (std::uint64_t r = 0; r < g.order(); ++r) {
        const GroupElement x = g.element_at(r);
        CHECK(shift(mu, a).mass(g.add(x, a)) == mu.mass(x));
        CHECK(reflect(mu).mass(g.neg(x)) == mu.mass(x));
      }
    }
    CHECK(convolve(dirac(g, g.element_at(g.order() - 1)), dirac(g, g.element_at(1))) ==
          dirac(g, g.add(g.element_at(g.order() - 1), g.element_at(1))));
  }
}

TEST_CASE("subgroup Haar measures are convolution idempotents") {
  for (const auto& g : testsupport::catalog()) {
    for (const auto& k : enumerate_subgroups(g)) {
      const Distribution h = haar_on_subgroup(k);
      CHECK(convolve(h, h) == h);
      CHECK(reflect(h) == h);
      for (const auto& x : k.elements()) CHECK(shift(h, x) == h);
    }
  }
}

TEST_CASE("haar shifts are recognized with canonical witnesses") {
  for (const auto& g : testsupport::catalog()) {
    testsupport::Rng rng(61);
    for (const auto& k : enumerate_subgroups(g)) {
      const GroupElement s = g.element_at(rng.below(g.order()));
      const Distribution mu = shift(haar_on_subgroup(k), s);
      const auto dec = is_haar_shift(mu);
      REQUIRE(dec.has_value());
      CHECK(dec->subgroup == k);
      CHECK(k.contains(g.sub(dec->shift, s)));
      // The witness shift is the least-rank support element.
      std::uint64_t least = g.order();
      for (const auto& x : support(mu)) least = std::min(least, g.rank_of(x));
      CHECK(g.rank_of(dec->shift) == least);
      CHECK(shift(haar_on_subgroup(dec->subgroup), dec->shift) == mu);
    }
  }

  const auto z5 = FiniteAbelianGroup::make({5});
  const auto z4 = FiniteAbelianGroup::make({4});
  // Uniform on a non-coset support.
  CHECK_FALSE(is_haar_shift(Distribution(
                                z5, {Rational(1, 2), Rational(1, 2), 0, 0, 0}))
                  .has_value());
  CHECK_FALSE(is_haar_shift(Distribution(
                                z4, {Rational(1, 2), Rational(1, 2), 0, 0}))
                  .has_value());
  // Coset support with non-uniform masses.
  CHECK_FALSE(is_haar_shift(Distribution(
                                z4, {Rational(1, 3), 0, Rational(2, 3), 0}))
                  .has_value());
  const auto dec = is_haar_shift(dirac(z5, z5.element({3})));
  REQUIRE(dec.has_value());
  CHECK(dec->subgroup.size() == 1);
  CHECK(dec->shift == z5.element({3}));
}

TEST_CASE("the minimal carrier is the subgroup spanned by both supports") {
  for (const auto& g : testsupport::catalog()) {
    for (std::uint64_t t = 0; t < 5; ++t) {
      const Distribution a = random_distribution(g, derive_seed(67, 2 * t), 2);
      const Distribution b = random_distribution(g, derive_seed(67, 2 * t + 1), 2);
      const Subgroup c = minimal_carrier_subgroup(a, b);
      std::vector<GroupElement> pts = support(a);
      const auto sb = support(b);
      pts.insert(pts.end(), sb.begin(), sb.end());
      for (const auto& x : pts) CHECK(c.contains(x));
      CHECK(subgroup_generated(g, pts) == c);
    }
  }
  const auto z8 = FiniteAbelianGroup::make({8});
  const Subgroup k = minimal_carrier_subgroup(dirac(z8, z8.element({2})),
                                              dirac(z8, z8.element({6})));
  CHECK(k.ranks() == std::vector<std::uint64_t>{0, 2, 4, 6});
}

TEST_CASE("random distributions are seed-deterministic") {
  const auto g = FiniteAbelianGroup::make({3, 3});
  const Distribution a = random_distribution(g, 12345, 6);
  const Distribution b = random_distribution(g, 12345, 6);
  const Distribution c = random_distribution(g, 12346, 6);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(total_mass(a) == 1);
  for (const auto& m : a.masses()) CHECK(m >= 0);
  CHECK_THROWS_AS(random_distribution(g, 1, 0), std::invalid_argument);
}

TEST_CASE("mixtures combine exactly and reject bad weights") {
  const auto g = FiniteAbelianGroup::make({4});
  const Distribution h = haar(g);
  const Distribution d = dirac(g, g.element({1}));
  const Distribution m = mix({{Rational(1, 4), h}, {Rational(3, 4), d}});
  CHECK(m.mass(g.element({1})) == Rational(1, 16) + Rational(3, 4));
  CHECK(m.mass(g.element({0})) == Rational(1, 16));
  CHECK(total_mass(m) == 1);
  CHECK_THROWS_AS(mix({{Rational(1, 2), h}, {Rational(1, 4), d}}), std::invalid_argument);
  CHECK_THROWS_AS(mix({{Rational(3, 2), h}, {Rational(-1, 2), d}}), std::invalid_argument);
}

TEST_CASE("seed derivation separates indices and bases") {
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
  CHECK(derive_seed(0, 0) != derive_seed(0, 1));
}
