#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_support.hpp"

#include "haarshift/smith.hpp"

#include <algorithm>
#include <map>
#include <numeric>

using namespace haarshift;

namespace {

// Laplace-expansion determinant, independent of the library's elimination.
Int minor_determinant(const IntMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Int det = 0;
  int sign = 1;
  for (std::size_t j = 0; j < n; ++j) {
    IntMatrix sub;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Int> row;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != j) row.push_back(m[r][c]);
      }
      sub.push_back(std::move(row));
    }
    det += sign * m[0][j] * minor_determinant(sub);
    sign = -sign;
  }
  return det;
}

// gcd of all k x k minors (nonnegative; 0 when every minor vanishes).
Int minor_gcd(const IntMatrix& m, std::size_t k) {
  const std::size_t rows = m.size();
  const std::size_t cols = m[0].size();
  std::vector<std::size_t> ri(k), ci(k);
  Int g = 0;
  std::vector<std::size_t> rsel, csel;
  const auto for_each_subset = [](std::size_t n, std::size_t k_, auto&& fn) {
    std::vector<std::size_t> idx(k_);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      fn(idx);
      std::size_t i = k_;
      while (i > 0 && idx[i - 1] == n - k_ + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k_; ++j) idx[j] = idx[j - 1] + 1;
    }
  };
  for_each_subset(rows, k, [&](const std::vector<std::size_t>& rs) {
    for_each_subset(cols, k, [&](const std::vector<std::size_t>& cs) {
      IntMatrix sub(k, std::vector<Int>(k));
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) sub[a][b] = m[rs[a]][cs[b]];
      }
      Int d = minor_determinant(sub);
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
    });
  });
  return g;
}

IntMatrix random_matrix(testsupport::Rng& rng, std::size_t rows, std::size_t cols) {
  IntMatrix m(rows, std::vector<Int>(cols));
  for (auto& row : m) {
    for (auto& x : row) x = rng.range(-9, 9);
  }
  return m;
}

}  // namespace

TEST_CASE("composite orders canonicalize to the primary decomposition") {
  CHECK(FiniteAbelianGroup::make({6}).orders() == std::vector<std::int64_t>{2, 3});
  CHECK(FiniteAbelianGroup::make({12}).orders() == std::vector<std::int64_t>{4, 3});
  CHECK(FiniteAbelianGroup::make({4, 2}).orders() == std::vector<std::int64_t>{2, 4});
  CHECK(FiniteAbelianGroup::make({4, 6}).orders() == std::vector<std::int64_t>{2, 4, 3});
  CHECK(FiniteAbelianGroup::make({2, 3}) == FiniteAbelianGroup::make({6}));
  CHECK(FiniteAbelianGroup::make({30}) == FiniteAbelianGroup::make({5, 6}));

  const auto g = FiniteAbelianGroup::make({4, 6});
  CHECK(g.order() == 24);
  CHECK(g.exponent() == 12);
  CHECK(g.factor_count() == 3);
  CHECK_FALSE(g.odd_order());
  CHECK(FiniteAbelianGroup::make({3, 5}).odd_order());

  const auto t = FiniteAbelianGroup::make({1});
  CHECK(t.trivial());
  CHECK(t.order() == 1);
  CHECK(t.exponent() == 1);

  CHECK_THROWS_AS(FiniteAbelianGroup::make({0}), std::invalid_argument);
  CHECK_THROWS_AS(FiniteAbelianGroup::make({-2}), std::invalid_argument);
  CHECK_THROWS_AS(FiniteAbelianGroup::make({1 << 21, 1 << 21}), std::invalid_argument);
}

TEST_CASE("element arithmetic, ranks and orders") {
  for (const auto& g :
       {FiniteAbelianGroup::make({4, 3}), FiniteAbelianGroup::make({2, 2, 2}),
        FiniteAbelianGroup::make({25})}) {
    for (std::uint64_t r = 0; r < g.order(); ++r) {
      const GroupElement x = g.element_at(r);
      CHECK(g.rank_of(x) == r);
      CHECK(g.add(x, g.neg(x)) == g.zero());
      CHECK(g.sub(x, x) == g.zero());
      CHECK(g.scale(3, x) == g.add(x, g.add(x, x)));
      const std::int64_t ord = g.element_order(x);
      CHECK(g.exponent() % ord == 0);
      CHECK(g.scale(ord, x) == g.zero());
      if (ord > 1) CHECK(g.scale(ord - 1, x) != g.zero());
    }
  }

  const auto g = FiniteAbelianGroup::make({4, 3});
  CHECK(g.element({5, -1}) == g.element({1, 2}));
  CHECK(g.element_order(g.zero()) == 1);
  CHECK_THROWS_AS(g.element({1}), std::invalid_argument);

  // Rank order is lexicographic on coordinates.
  CHECK(g.rank_of(g.element({0, 1})) == 1);
  CHECK(g.rank_of(g.element({1, 0})) == 3);
}

TEST_CASE("subgroup lattices have the predicted sizes") {
  const std::vector<std::size_t> expected = {2, 3, 2, 5, 4, 3, 6, 8, 3, 8};
  const auto groups = testsupport::catalog();
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto subs = enumerate_subgroups(groups[i]);
    CHECK(subs.size() == expected[i]);
    CHECK(std::is_sorted(subs.begin(), subs.end()));
    bool has_trivial = false;
    bool has_full = false;
    for (const auto& k : subs) {
      CHECK(groups[i].order() % k.size() == 0);
      if (k.size() == 1) has_trivial = true;
      if (k.size() == groups[i].order()) has_full = true;
    }
    CHECK(has_trivial);
    CHECK(has_full);
    for (std::size_t a = 0; a + 1 < subs.size(); ++a) CHECK(subs[a] != subs[a + 1]);
  }
}

TEST_CASE("subgroups verify closure and regenerate from their generators") {
  for (const auto& g : testsupport::catalog()) {
    for (const auto& k : enumerate_subgroups(g)) {
      CHECK(Subgroup::from_elements(g, k.elements()) == k);
      CHECK(subgroup_generated(g, k.generators()) == k);
      for (std::uint64_t r = 0; r < g.order(); ++r) {
        const bool in_ranks =
            std::binary_search(k.ranks().begin(), k.ranks().end(), r);
        CHECK(k.contains_rank(r) == in_ranks);
        CHECK(k.contains(g.element_at(r)) == in_ranks);
      }
    }
  }

  const auto z4 = FiniteAbelianGroup::make({4});
  CHECK_THROWS_AS(Subgroup::from_elements(z4, {z4.zero(), z4.element({1})}),
                  std::invalid_argument);
}

TEST_CASE("quotients satisfy the index formula and kill exactly the subgroup") {
  for (const auto& g : testsupport::catalog()) {
    for (const auto& k : enumerate_subgroups(g)) {
      const QuotientDecomposition q = quotient(g, k);
      CHECK(q.quotient.order() * k.size() == g.order());
      for (std::uint64_t r = 0; r < q.quotient.order(); ++r) {
        const GroupElement e = q.quotient.element_at(r);
        CHECK(q.project(q.lift(e)) == e);
      }
      for (std::uint64_t r = 0; r < g.order(); ++r) {
        const GroupElement x = g.element_at(r);
        CHECK((q.project(x) == q.quotient.zero()) == k.contains(x));
      }
    }
  }
}

TEST_CASE("doubling image and two-torsion split the group order") {
  for (const auto& g : testsupport::catalog()) {
    const Subgroup d = doubling_image(g);
    const Subgroup t = two_torsion(g);
    CHECK(d.size() * t.size() == g.order());
    CHECK((d.size() == g.order()) == g.odd_order());
    CHECK((t.size() == 1) == g.odd_order());
  }
  const auto z4 = FiniteAbelianGroup::make({4});
  CHECK(doubling_image(z4).ranks() == std::vector<std::uint64_t>{0, 2});
  CHECK(two_torsion(z4).ranks() == std::vector<std::uint64_t>{0, 2});
  const auto z22 = FiniteAbelianGroup::make({2, 2});
  CHECK(doubling_image(z22).size() == 1);
  CHECK(two_torsion(z22).size() == 4);
}

TEST_CASE("smith normal form on pinned matrices") {
  const auto diag_of = [](const IntMatrix& m) { return smith_normal_form(m).diagonal; };
  CHECK(diag_of({{2, 0}, {0, 4}}) == std::vector<Int>{2, 4});
  CHECK(diag_of({{4, 0}, {0, 6}}) == std::vector<Int>{2, 12});
  CHECK(diag_of({{1, 2}, {3, 4}}) == std::vector<Int>{1, 2});
  CHECK(diag_of({{1, 0}, {0, 1}}) == std::vector<Int>{1, 1});
  CHECK(diag_of({{0, 0}, {0, 0}}) == std::vector<Int>{0, 0});
  CHECK(diag_of({{2, 4, 4}}) == std::vector<Int>{2});
}

TEST_CASE("smith diagonal matches the minor-gcd invariants on random matrices") {
  testsupport::Rng rng(411);
  const std::vector<std::pair<std::size_t, std::size_t>> shapes = {
      {2, 2}, {3, 3}, {3, 4}, {4, 3}};
  for (const auto& [rows, cols] : shapes) {
    for (int trial = 0; trial < 25; ++trial) {
      const IntMatrix a = random_matrix(rng, rows, cols);
      const SmithDecomposition s = smith_normal_form(a);
      REQUIRE(s.diagonal.size() == std::min(rows, cols));

      // Divisibility chain with zeros only at the tail.
      for (std::size_t i = 0; i < s.diagonal.size(); ++i) {
        CHECK(s.diagonal[i] >= 0);
        if (i + 1 < s.diagonal.size() && s.diagonal[i] != 0) {
          if (s.diagonal[i + 1] != 0) CHECK(s.diagonal[i + 1] % s.diagonal[i] == 0);
        }
        if (s.diagonal[i] == 0 && i + 1 < s.diagonal.size()) {
          CHECK(s.diagonal[i + 1] == 0);
        }
      }

      // Row transform is a tracked inverse pair.
      const std::size_t n = s.row_ops.size();
      REQUIRE(s.row_ops_inv.size() == n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          Int acc = 0;
          for (std::size_t k = 0; k < n; ++k) acc += s.row_ops[i][k] * s.row_ops_inv[k][j];
          CHECK(acc == (i == j ? 1 : 0));
        }
      }

      // d_1 ... d_k equals the gcd of all k x k minors.
      Int prod = 1;
      for (std::size_t k = 1; k <= s.diagonal.size(); ++k) {
        prod *= s.diagonal[k - 1];
        Int expected = minor_gcd(a, k);
        Int got = prod;
        mpz_abs(got.get_mpz_t(), got.get_mpz_t());
        CHECK(got == expected);
      }
    }
  }
}
