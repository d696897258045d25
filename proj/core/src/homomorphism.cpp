#include "haarshift/homomorphism.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "haarshift/duality.hpp"

namespace haarshift {

Homomorphism::Homomorphism(FiniteAbelianGroup domain, FiniteAbelianGroup codomain,
                           std::vector<std::vector<std::int64_t>> matrix)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(matrix)) {}

Homomorphism Homomorphism::make(FiniteAbelianGroup domain, FiniteAbelianGroup codomain,
                                std::vector<std::vector<std::int64_t>> matrix) {
  const auto& m = domain.orders();
  const auto& n = codomain.orders();
  if (matrix.size() != n.size()) {
    throw std::invalid_argument("Homomorphism: row count does not match codomain");
  }
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (matrix[i].size() != m.size()) {
      throw std::invalid_argument("Homomorphism: column count does not match domain");
    }
    for (std::size_t j = 0; j < matrix[i].size(); ++j) {
      std::int64_t& a = matrix[i][j];
      a %= n[i];
      if (a < 0) a += n[i];
      const std::int64_t need = n[i] / std::gcd(n[i], m[j]);
      if (a % need != 0) {
        throw std::invalid_argument(
            "Homomorphism: entry (" + std::to_string(i) + "," + std::to_string(j) +
            ") violates the divisibility constraint for a well-defined map");
      }
    }
  }
  return Homomorphism(std::move(domain), std::move(codomain), std::move(matrix));
}

Homomorphism Homomorphism::identity(const FiniteAbelianGroup& g) {
  std::vector<std::vector<std::int64_t>> m(g.factor_count(),
                                           std::vector<std::int64_t>(g.factor_count(), 0));
  for (std::size_t i = 0; i < g.factor_count(); ++i) m[i][i] = 1;
  return make(g, g, std::move(m));
}

Homomorphism Homomorphism::zero_map(FiniteAbelianGroup domain, FiniteAbelianGroup codomain) {
  std::vector<std::vector<std::int64_t>> m(codomain.factor_count(),
                                           std::vector<std::int64_t>(domain.factor_count(), 0));
  return make(std::move(domain), std::move(codomain), std::move(m));
}

Homomorphism Homomorphism::scalar(const FiniteAbelianGroup& g, std::int64_t k) {
  return diagonal(g, std::vector<std::int64_t>(g.factor_count(), k));
}

Homomorphism Homomorphism::diagonal(const FiniteAbelianGroup& g,
                                    const std::vector<std::int64_t>& per_factor) {
  if (per_factor.size() != g.factor_count()) {
    throw std::invalid_argument("diagonal: entry count does not match factor count");
  }
  std::vector<std::vector<std::int64_t>> m(g.factor_count(),
                                           std::vector<std::int64_t>(g.factor_count(), 0));
  for (std::size_t i = 0; i < g.factor_count(); ++i) m[i][i] = per_factor[i];
  return make(g, g, std::move(m));
}

GroupElement Homomorphism::apply(const GroupElement& x) const {
  if (x.coords.size() != domain_.factor_count()) {
    throw std::invalid_argument("Homomorphism: argument coordinate count mismatch");
  }
  const auto& n = codomain_.orders();
  std::vector<std::int64_t> y(n.size(), 0);
  for (std::size_t i = 0; i < n.size(); ++i) {
    __int128 acc = 0;
    for (std::size_t j = 0; j < x.coords.size(); ++j) {
      acc += static_cast<__int128>(matrix_[i][j]) * x.coords[j];
    }
    y[i] = static_cast<std::int64_t>(acc % n[i]);
  }
  return GroupElement{std::move(y)};
}

bool operator==(const Homomorphism& a, const Homomorphism& b) {
  return a.domain_ == b.domain_ && a.codomain_ == b.codomain_ && a.matrix_ == b.matrix_;
}

Homomorphism compose(const Homomorphism& f, const Homomorphism& g) {
  if (g.codomain() != f.domain()) throw std::invalid_argument("compose: domains do not chain");
  const std::size_t rows = f.codomain().factor_count();
  const std::size_t mid = f.domain().factor_count();
  const std::size_t cols = g.domain().factor_count();
  std::vector<std::vector<std::int64_t>> m(rows, std::vector<std::int64_t>(cols, 0));
  for (std::size_t i = 0; i < rows; ++i) {
    const std::int64_t n = f.codomain().orders()[i];
    for (std::size_t k = 0; k < cols; ++k) {
      __int128 acc = 0;
      for (std::size_t j = 0; j < mid; ++j) {
        acc += static_cast<__int128>(f.matrix()[i][j]) * g.matrix()[j][k];
      }
      m[i][k] = static_cast<std::int64_t>(acc % n);
    }
  }
  return Homomorphism::make(g.domain(), f.codomain(), std::move(m));
}

Homomorphism hom_sum(const Homomorphism& f, const Homomorphism& g) {
  if (f.domain() != g.domain() || f.codomain() != g.codomain()) {
    throw std::invalid_argument("hom_sum: maps are not parallel");
  }
  std::vector<std::vector<std::int64_t>> m = f.matrix();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) m[i][j] += g.matrix()[i][j];
  }
  return Homomorphism::make(f.domain(), f.codomain(), std::move(m));
}

bool is_automorphism(const Homomorphism& f) {
  if (!f.is_endomorphism()) {
    throw std::invalid_argument("is_automorphism: not an endomorphism");
  }
  const auto& g = f.domain();
  for (std::uint64_t r = 1; r < g.order(); ++r) {
    if (g.rank_of(f.apply(g.element_at(r))) == 0) return false;
  }
  return true;
}

Homomorphism invert(const Homomorphism& f) {
  if (!f.is_endomorphism()) throw std::invalid_argument("invert: not an endomorphism");
  const auto& g = f.domain();
  constexpr std::uint64_t kNoPreimage = ~std::uint64_t{0};
  std::vector<std::uint64_t> preimage(g.order(), kNoPreimage);
  for (std::uint64_t r = 0; r < g.order(); ++r) {
    const std::uint64_t img = g.rank_of(f.apply(g.element_at(r)));
    if (preimage[img] != kNoPreimage) {
      throw std::invalid_argument("invert: not an automorphism");
    }
    preimage[img] = r;
  }

  const std::size_t k = g.factor_count();
  std::vector<std::vector<std::int64_t>> m(k, std::vector<std::int64_t>(k, 0));
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<std::int64_t> unit(k, 0);
    unit[j] = 1;
    const GroupElement pre = g.element_at(preimage[g.rank_of(GroupElement{unit})]);
    for (std::size_t i = 0; i < k; ++i) m[i][j] = pre.coords[i];
  }
  Homomorphism inv = Homomorphism::make(g, g, std::move(m));
  if (!(compose(f, inv) == Homomorphism::identity(g)) ||
      !(compose(inv, f) == Homomorphism::identity(g))) {
    throw std::logic_error("invert: certification against the identity failed");
  }
  return inv;
}

Homomorphism adjoint(const Homomorphism& f) {
  const auto& m = f.domain().orders();   // column moduli of f
  const auto& n = f.codomain().orders();  // row moduli of f
  std::vector<std::vector<std::int64_t>> b(m.size(), std::vector<std::int64_t>(n.size(), 0));
  for (std::size_t i = 0; i < n.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      const __int128 scaled = static_cast<__int128>(f.matrix()[i][j]) * m[j];
      if (scaled % n[i] != 0) {
        throw std::logic_error("adjoint: entry fails integrality (invalid source matrix)");
      }
      b[j][i] = static_cast<std::int64_t>(scaled / n[i] % m[j]);
    }
  }
  Homomorphism adj = Homomorphism::make(f.codomain(), f.domain(), std::move(b));

  // Exhaustive certificate of the transpose law on small groups: character
  // values agree as roots of unity of the respective exponents.
  const auto& gd = f.domain();
  const auto& gc = f.codomain();
  if (gd.order() * gc.order() <= (std::uint64_t{1} << 22)) {
    const std::int64_t nd = gd.exponent();
    const std::int64_t nc = gc.exponent();
    const __int128 common = static_cast<__int128>(nd) * nc;
    for (std::uint64_t xr = 0; xr < gd.order(); ++xr) {
      const GroupElement x = gd.element_at(xr);
      const GroupElement fx = f.apply(x);
      for (std::uint64_t yr = 0; yr < gc.order(); ++yr) {
        const DualElement y = gc.element_at(yr);
        const __int128 lhs = static_cast<__int128>(pairing_exponent(gc, fx, y)) * nd;
        const __int128 rhs = static_cast<__int128>(pairing_exponent(gd, x, adj.apply(y))) * nc;
        if ((lhs - rhs) % common != 0) {
          throw std::logic_error("adjoint: transpose law violated");
        }
      }
    }
  }
  return adj;
}

std::pair<Homomorphism, Homomorphism> id_plus_minus(const Homomorphism& alpha) {
  if (!alpha.is_endomorphism()) {
    throw std::invalid_argument("id_plus_minus: not an endomorphism");
  }
  const auto& g = alpha.domain();
  std::vector<std::vector<std::int64_t>> plus = alpha.matrix();
  std::vector<std::vector<std::int64_t>> minus = alpha.matrix();
  for (std::size_t i = 0; i < g.factor_count(); ++i) {
    plus[i][i] += 1;
    for (auto& v : minus[i]) v = -v;
    minus[i][i] += 1;
  }
  return {Homomorphism::make(g, g, std::move(plus)), Homomorphism::make(g, g, std::move(minus))};
}

bool is_admissible(const Homomorphism& alpha) {
  if (!alpha.is_endomorphism()) {
    throw std::invalid_argument("is_admissible: not an endomorphism");
  }
  if (!is_automorphism(alpha)) return false;
  const auto [plus, minus] = id_plus_minus(alpha);
  return is_automorphism(plus) && is_automorphism(minus);
}

namespace {

// Elements of exact order n, the candidate images of a basis vector of
// order n under an automorphism.
std::vector<GroupElement> elements_of_order(const FiniteAbelianGroup& g, std::int64_t n) {
  std::vector<GroupElement> out;
  for (std::uint64_t r = 0; r < g.order(); ++r) {
    GroupElement e = g.element_at(r);
    if (g.element_order(e) == n) out.push_back(std::move(e));
  }
  return out;
}

std::vector<char> closed_set_with(const FiniteAbelianGroup& g, const std::vector<char>& base,
                                  const GroupElement& gen, std::uint64_t& size) {
  std::vector<char> bit = base;
  std::vector<std::uint64_t> base_list;
  for (std::uint64_t r = 0; r < bit.size(); ++r) {
    if (bit[r]) base_list.push_back(r);
  }
  GroupElement m = gen;
  while (!bit[g.rank_of(m)]) {
    for (std::uint64_t h : base_list) {
      const std::uint64_t nr = g.rank_of(g.add(g.element_at(h), m));
      bit[nr] = 1;
    }
    m = g.add(m, gen);
  }
  size = 0;
  for (char c : bit) size += c;
  return bit;
}

Homomorphism columns_to_hom(const FiniteAbelianGroup& g,
                            const std::vector<GroupElement>& cols) {
  std::vector<std::vector<std::int64_t>> m(g.factor_count(),
                                           std::vector<std::int64_t>(g.factor_count(), 0));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < g.factor_count(); ++i) m[i][j] = cols[j].coords[i];
  }
  return Homomorphism::make(g, g, std::move(m));
}

void enumerate_rec(const FiniteAbelianGroup& g,
                   const std::vector<std::vector<GroupElement>>& candidates, std::size_t depth,
                   std::vector<GroupElement>& cols, const std::vector<char>& span,
                   std::uint64_t span_size, std::vector<Homomorphism>& out) {
  constexpr std::size_t kMaxAutomorphisms = 1000000;
  if (depth == candidates.size()) {
    out.push_back(columns_to_hom(g, cols));
    if (out.size() > kMaxAutomorphisms) {
      throw CapExceeded("enumerate_automorphisms: result count exceeds safety cap");
    }
    return;
  }
  const std::uint64_t target = span_size * static_cast<std::uint64_t>(g.orders()[depth]);
  for (const GroupElement& cand : candidates[depth]) {
    std::uint64_t new_size = 0;
    std::vector<char> next = closed_set_with(g, span, cand, new_size);
    // Chosen images must generate a subgroup of exactly the partial-product
    // size, or no completion can be bijective.
    if (new_size != target) continue;
    cols.push_back(cand);
    enumerate_rec(g, candidates, depth + 1, cols, next, new_size, out);
    cols.pop_back();
  }
}

}  // namespace

std::vector<Homomorphism> enumerate_automorphisms(const FiniteAbelianGroup& g,
                                                  std::uint64_t cap) {
  if (g.order() > cap) {
    throw CapExceeded("enumerate_automorphisms: group order exceeds cap");
  }
  if (g.trivial()) return {Homomorphism::identity(g)};

  std::vector<std::vector<GroupElement>> candidates;
  candidates.reserve(g.factor_count());
  for (std::size_t j = 0; j < g.factor_count(); ++j) {
    candidates.push_back(elements_of_order(g, g.orders()[j]));
  }
  std::vector<Homomorphism> out;
  std::vector<GroupElement> cols;
  std::vector<char> span(g.order(), 0);
  span[0] = 1;
  enumerate_rec(g, candidates, 0, cols, span, 1, out);
  return out;
}

std::vector<Homomorphism> sample_automorphisms(const FiniteAbelianGroup& g, std::size_t count,
                                               std::uint64_t seed) {
  if (g.trivial() || count == 0) {
    return count ? std::vector<Homomorphism>{Homomorphism::identity(g)}
                 : std::vector<Homomorphism>{};
  }
  std::vector<std::vector<GroupElement>> candidates;
  for (std::size_t j = 0; j < g.factor_count(); ++j) {
    candidates.push_back(elements_of_order(g, g.orders()[j]));
  }
  std::mt19937_64 eng(seed);
  std::set<std::vector<std::vector<std::int64_t>>> seen;
  std::vector<Homomorphism> out;
  const std::size_t budget = 200 * count + 100;
  for (std::size_t attempt = 0; attempt < budget && out.size() < count; ++attempt) {
    std::vector<GroupElement> cols;
    cols.reserve(g.factor_count());
    for (const auto& list : candidates) {
      cols.push_back(list[static_cast<std::size_t>(eng() % list.size())]);
    }
    Homomorphism h = columns_to_hom(g, cols);
    if (!seen.insert(h.matrix()).second) continue;
    if (is_automorphism(h)) out.push_back(std::move(h));
  }
  return out;
}

Subgroup image_subgroup(const Homomorphism& f) {
  const auto& d = f.domain();
  const auto& c = f.codomain();
  std::vector<char> seen(c.order(), 0);
  std::vector<std::uint64_t> ranks;
  for (std::uint64_t r = 0; r < d.order(); ++r) {
    const std::uint64_t img = c.rank_of(f.apply(d.element_at(r)));
    if (!seen[img]) {
      seen[img] = 1;
      ranks.push_back(img);
    }
  }
  return subgroup_from_closed_ranks(c, std::move(ranks));
}

Subgroup kernel_subgroup(const Homomorphism& f) {
  const auto& d = f.domain();
  const auto& c = f.codomain();
  std::vector<std::uint64_t> ranks;
  for (std::uint64_t r = 0; r < d.order(); ++r) {
    if (c.rank_of(f.apply(d.element_at(r))) == 0) ranks.push_back(r);
  }
  return subgroup_from_closed_ranks(d, std::move(ranks));
}

Subgroup image_of_subgroup(const Homomorphism& f, const Subgroup& k) {
  if (k.parent() != f.domain()) {
    throw std::invalid_argument("image_of_subgroup: subgroup of a different group");
  }
  const auto& c = f.codomain();
  std::vector<char> seen(c.order(), 0);
  std::vector<std::uint64_t> ranks;
  for (std::uint64_t r : k.ranks()) {
    const std::uint64_t img = c.rank_of(f.apply(f.domain().element_at(r)));
    if (!seen[img]) {
      seen[img] = 1;
      ranks.push_back(img);
    }
  }
  return subgroup_from_closed_ranks(c, std::move(ranks));
}

GroupElement SubgroupEmbedding::to_parent(const GroupElement& a) const {
  return subgroup.parent().element_at(parent_rank_of[abstract_group.rank_of(
      abstract_group.element(a.coords))]);
}

GroupElement SubgroupEmbedding::from_parent(const GroupElement& x) const {
  const auto& g = subgroup.parent();
  const std::int64_t n = g.exponent();
  std::vector<std::int64_t> coords(basis.size());
  for (std::size_t t = 0; t < basis.size(); ++t) {
    const std::int64_t e = pairing_exponent(g, x, basis[t].dual_point);
    const std::int64_t w = n / basis[t].factor_order;
    if (e % w != 0) {
      throw std::invalid_argument("SubgroupEmbedding: element is not in the subgroup");
    }
    coords[t] = e / w;
  }
  return GroupElement{std::move(coords)};
}

SubgroupEmbedding subgroup_structure(const Subgroup& k) {
  const FiniteAbelianGroup& g = k.parent();
  const Subgroup ann = annihilator(g, k);
  const QuotientDecomposition qd = quotient(g, ann);

  SubgroupEmbedding emb{k, qd.quotient, {}, {}};
  const std::size_t t_count = qd.quotient.factor_count();
  for (std::size_t t = 0; t < t_count; ++t) {
    std::vector<std::int64_t> unit(t_count, 0);
    unit[t] = 1;
    emb.basis.push_back(SubgroupEmbedding::DualBasis{
        qd.lift(qd.quotient.element(unit)), qd.quotient.orders()[t]});
  }

  // Characters of the dual quotient are exactly the subgroup elements; the
  // evaluation map must therefore be a bijection onto the abstract ranks.
  constexpr std::uint64_t kUnset = ~std::uint64_t{0};
  emb.parent_rank_of.assign(k.size(), kUnset);
  for (std::uint64_t r : k.ranks()) {
    const GroupElement a = emb.from_parent(g.element_at(r));
    const std::uint64_t ar = emb.abstract_group.rank_of(a);
    if (emb.parent_rank_of.at(ar) != kUnset) {
      throw std::logic_error("subgroup_structure: coordinate map is not injective");
    }
    emb.parent_rank_of[ar] = r;
  }
  return emb;
}

Homomorphism restrict_to(const Homomorphism& alpha, const SubgroupEmbedding& embedding) {
  if (!alpha.is_endomorphism() || alpha.domain() != embedding.subgroup.parent()) {
    throw std::invalid_argument("restrict_to: not an endomorphism of the parent group");
  }
  for (const auto& gen : embedding.subgroup.generators()) {
    if (!embedding.subgroup.contains(alpha.apply(gen))) {
      throw std::domain_error("restrict_to: subgroup is not invariant under the map");
    }
  }
  const auto& a = embedding.abstract_group;
  std::vector<std::vector<std::int64_t>> m(a.factor_count(),
                                           std::vector<std::int64_t>(a.factor_count(), 0));
  for (std::size_t t = 0; t < a.factor_count(); ++t) {
    std::vector<std::int64_t> unit(a.factor_count(), 0);
    unit[t] = 1;
    const GroupElement image =
        embedding.from_parent(alpha.apply(embedding.to_parent(a.element(unit))));
    for (std::size_t i = 0; i < a.factor_count(); ++i) m[i][t] = image.coords[i];
  }
  return Homomorphism::make(a, a, std::move(m));
}

Homomorphism restrict_to(const Homomorphism& alpha, const Subgroup& k) {
  return restrict_to(alpha, subgroup_structure(k));
}

Homomorphism induced_on_quotient(const Homomorphism& alpha, const QuotientDecomposition& q) {
  if (!alpha.is_endomorphism() || alpha.domain() != q.parent) {
    throw std::invalid_argument("induced_on_quotient: not an endomorphism of the parent group");
  }
  const auto& quot = q.quotient;
  std::vector<std::vector<std::int64_t>> m(quot.factor_count(),
                                           std::vector<std::int64_t>(quot.factor_count(), 0));
  for (std::size_t t = 0; t < quot.factor_count(); ++t) {
    std::vector<std::int64_t> unit(quot.factor_count(), 0);
    unit[t] = 1;
    const GroupElement image = q.project(alpha.apply(q.lift(quot.element(unit))));
    for (std::size_t i = 0; i < quot.factor_count(); ++i) m[i][t] = image.coords[i];
  }
  Homomorphism induced = Homomorphism::make(quot, quot, std::move(m));

  // Commuting with the projection on every parent basis vector certifies
  // both well-definedness and correctness of the construction.
  for (std::size_t j = 0; j < q.parent.factor_count(); ++j) {
    std::vector<std::int64_t> unit(q.parent.factor_count(), 0);
    unit[j] = 1;
    const GroupElement e = q.parent.element(unit);
    if (induced.apply(q.project(e)) != q.project(alpha.apply(e))) {
      throw std::domain_error("induced_on_quotient: map does not descend to the quotient");
    }
  }
  return induced;
}

Homomorphism projection_hom(const QuotientDecomposition& q) {
  return Homomorphism::make(q.parent, q.quotient, q.projection);
}

}  // namespace haarshift
