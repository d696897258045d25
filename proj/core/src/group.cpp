#include "haarshift/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "haarshift/arith.hpp"
#include "haarshift/smith.hpp"

namespace haarshift {

namespace {

// Largest supported group order; keeps rank arithmetic safely inside int64
// and rules out accidental astronomically sized enumerations.
constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 40;

}  // namespace

struct FiniteAbelianGroup::Data {
  std::vector<std::int64_t> orders;
  std::vector<std::uint64_t> strides;
  std::uint64_t order = 1;
  std::int64_t exponent = 1;
  bool odd = true;
  FieldPtr field;
};

FiniteAbelianGroup::FiniteAbelianGroup(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

FiniteAbelianGroup FiniteAbelianGroup::make(const std::vector<std::int64_t>& orders) {
  struct Factor {
    std::int64_t prime;
    int exp;
    std::int64_t value;
  };
  std::vector<Factor> factors;
  for (std::int64_t n : orders) {
    if (n < 1) throw std::invalid_argument("FiniteAbelianGroup: factor orders must be >= 1");
    for (const auto& [p, e] : factorize(n)) {
      std::int64_t pe = 1;
      for (int i = 0; i < e; ++i) pe *= p;
      factors.push_back({p, e, pe});
    }
  }
  // Stable sort keeps the relative order of equal prime powers, so callers
  // that track per-factor bookkeeping can rely on it.
  std::stable_sort(factors.begin(), factors.end(), [](const Factor& a, const Factor& b) {
    return a.prime != b.prime ? a.prime < b.prime : a.exp < b.exp;
  });

  auto data = std::make_shared<Data>();
  for (const auto& f : factors) {
    if (data->order > kMaxOrder / static_cast<std::uint64_t>(f.value)) {
      throw std::invalid_argument("FiniteAbelianGroup: order too large");
    }
    data->order *= static_cast<std::uint64_t>(f.value);
    data->orders.push_back(f.value);
    if (f.prime == 2) data->odd = false;
  }
  std::map<std::int64_t, std::int64_t> prime_max;
  for (const auto& f : factors) {
    prime_max[f.prime] = std::max(prime_max[f.prime], f.value);
  }
  for (const auto& [p, pe] : prime_max) data->exponent *= pe;

  data->strides.assign(data->orders.size(), 1);
  for (std::size_t i = data->orders.size(); i-- > 1;) {
    data->strides[i - 1] = data->strides[i] * static_cast<std::uint64_t>(data->orders[i]);
  }
  data->field = CyclotomicField::make(data->exponent);
  return FiniteAbelianGroup(std::move(data));
}

const std::vector<std::int64_t>& FiniteAbelianGroup::orders() const { return data_->orders; }
std::size_t FiniteAbelianGroup::factor_count() const { return data_->orders.size(); }
std::uint64_t FiniteAbelianGroup::order() const { return data_->order; }
std::int64_t FiniteAbelianGroup::exponent() const { return data_->exponent; }
bool FiniteAbelianGroup::trivial() const { return data_->orders.empty(); }
bool FiniteAbelianGroup::odd_order() const { return data_->odd; }
const FieldPtr& FiniteAbelianGroup::field() const { return data_->field; }

GroupElement FiniteAbelianGroup::zero() const {
  return GroupElement{std::vector<std::int64_t>(factor_count(), 0)};
}

GroupElement FiniteAbelianGroup::element(std::vector<std::int64_t> coords) const {
  if (coords.size() != factor_count()) {
    throw std::invalid_argument("element: coordinate count does not match factor count");
  }
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const std::int64_t n = data_->orders[i];
    coords[i] %= n;
    if (coords[i] < 0) coords[i] += n;
  }
  return GroupElement{std::move(coords)};
}

GroupElement FiniteAbelianGroup::add(const GroupElement& a, const GroupElement& b) const {
  std::vector<std::int64_t> c(factor_count());
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = a.coords[i] + b.coords[i];
    if (c[i] >= data_->orders[i]) c[i] -= data_->orders[i];
  }
  return GroupElement{std::move(c)};
}

GroupElement FiniteAbelianGroup::sub(const GroupElement& a, const GroupElement& b) const {
  std::vector<std::int64_t> c(factor_count());
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = a.coords[i] - b.coords[i];
    if (c[i] < 0) c[i] += data_->orders[i];
  }
  return GroupElement{std::move(c)};
}

GroupElement FiniteAbelianGroup::neg(const GroupElement& a) const { return sub(zero(), a); }

GroupElement FiniteAbelianGroup::scale(std::int64_t k, const GroupElement& a) const {
  std::vector<std::int64_t> c(factor_count());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::int64_t n = data_->orders[i];
    std::int64_t kk = k % n;
    if (kk < 0) kk += n;
    c[i] = static_cast<std::int64_t>(static_cast<__int128>(kk) * a.coords[i] % n);
  }
  return GroupElement{std::move(c)};
}

std::int64_t FiniteAbelianGroup::element_order(const GroupElement& a) const {
  std::int64_t ord = 1;
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    const std::int64_t n = data_->orders[i];
    ord = std::lcm(ord, n / std::gcd(n, a.coords[i]));
  }
  return ord;
}

std::uint64_t FiniteAbelianGroup::rank_of(const GroupElement& a) const {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    r += static_cast<std::uint64_t>(a.coords[i]) * data_->strides[i];
  }
  return r;
}

GroupElement FiniteAbelianGroup::element_at(std::uint64_t rank) const {
  if (rank >= order()) throw std::invalid_argument("element_at: rank out of range");
  std::vector<std::int64_t> c(factor_count());
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = static_cast<std::int64_t>(rank / data_->strides[i]);
    rank %= data_->strides[i];
  }
  return GroupElement{std::move(c)};
}

bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
  return a.data_ == b.data_ || a.data_->orders == b.data_->orders;
}

bool operator!=(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) { return !(a == b); }

namespace {

// Mutable membership set over ranks; every set built here contains 0.
struct RankSet {
  std::vector<char> bit;
  std::vector<std::uint64_t> list;

  explicit RankSet(std::uint64_t universe) : bit(universe, 0) {
    bit[0] = 1;
    list.push_back(0);
  }
};

// Grows s to the closure of (s union {g}) by appending whole cosets
// s + k*g until k*g lands back in the set.
void closure_extend(const FiniteAbelianGroup& g, RankSet& s, const GroupElement& gen) {
  const std::uint64_t gen_rank = g.rank_of(gen);
  if (s.bit[gen_rank]) return;
  const std::vector<std::uint64_t> base = s.list;
  GroupElement m = gen;
  while (!s.bit[g.rank_of(m)]) {
    for (std::uint64_t h : base) {
      const std::uint64_t nr = g.rank_of(g.add(g.element_at(h), m));
      if (!s.bit[nr]) {
        s.bit[nr] = 1;
        s.list.push_back(nr);
      }
    }
    m = g.add(m, gen);
  }
}

std::vector<GroupElement> greedy_generators(const FiniteAbelianGroup& g,
                                            const std::vector<std::uint64_t>& sorted_ranks) {
  if (sorted_ranks.size() <= 1) return {};
  std::vector<std::pair<std::int64_t, std::uint64_t>> cands;
  cands.reserve(sorted_ranks.size());
  for (std::uint64_t r : sorted_ranks) {
    if (r == 0) continue;
    cands.emplace_back(-g.element_order(g.element_at(r)), r);
  }
  std::sort(cands.begin(), cands.end());

  RankSet cur(g.order());
  std::vector<GroupElement> gens;
  for (const auto& [negord, r] : cands) {
    if (cur.list.size() == sorted_ranks.size()) break;
    if (cur.bit[r]) continue;
    GroupElement e = g.element_at(r);
    closure_extend(g, cur, e);
    gens.push_back(std::move(e));
  }
  return gens;
}

}  // namespace

Subgroup::Subgroup(FiniteAbelianGroup parent, std::vector<std::uint64_t> ranks,
                   std::vector<GroupElement> generators)
    : parent_(std::move(parent)), ranks_(std::move(ranks)), generators_(std::move(generators)) {}

Subgroup Subgroup::trivial_subgroup(const FiniteAbelianGroup& parent) {
  return Subgroup(parent, {0}, {});
}

Subgroup Subgroup::full_subgroup(const FiniteAbelianGroup& parent) {
  std::vector<std::uint64_t> ranks(parent.order());
  std::iota(ranks.begin(), ranks.end(), std::uint64_t{0});
  return Subgroup(parent, std::move(ranks), greedy_generators(parent, ranks));
}

Subgroup Subgroup::from_elements(const FiniteAbelianGroup& parent,
                                 const std::vector<GroupElement>& elements) {
  RankSet s(parent.order());
  std::vector<std::uint64_t> input;
  input.reserve(elements.size());
  bool has_zero = false;
  for (const auto& e : elements) {
    const GroupElement canon = parent.element(e.coords);
    const std::uint64_t r = parent.rank_of(canon);
    if (r == 0) has_zero = true;
    input.push_back(r);
    closure_extend(parent, s, canon);
  }
  if (!has_zero) throw std::invalid_argument("Subgroup: element set does not contain zero");
  std::sort(input.begin(), input.end());
  input.erase(std::unique(input.begin(), input.end()), input.end());
  if (s.list.size() != input.size()) {
    throw std::invalid_argument("Subgroup: element set is not closed under addition");
  }
  return Subgroup(parent, std::move(input), greedy_generators(parent, input));
}

bool Subgroup::contains(const GroupElement& x) const {
  return contains_rank(parent_.rank_of(x));
}

bool Subgroup::contains_rank(std::uint64_t rank) const {
  return std::binary_search(ranks_.begin(), ranks_.end(), rank);
}

std::vector<GroupElement> Subgroup::elements() const {
  std::vector<GroupElement> out;
  out.reserve(ranks_.size());
  for (std::uint64_t r : ranks_) out.push_back(parent_.element_at(r));
  return out;
}

bool operator==(const Subgroup& a, const Subgroup& b) {
  return a.parent_ == b.parent_ && a.ranks_ == b.ranks_;
}

bool operator!=(const Subgroup& a, const Subgroup& b) { return !(a == b); }

bool operator<(const Subgroup& a, const Subgroup& b) { return a.ranks_ < b.ranks_; }

Subgroup subgroup_generated(const FiniteAbelianGroup& g, const std::vector<GroupElement>& gens) {
  RankSet s(g.order());
  for (const auto& gen : gens) closure_extend(g, s, g.element(gen.coords));
  std::sort(s.list.begin(), s.list.end());
  std::vector<GroupElement> mingens = greedy_generators(g, s.list);
  return Subgroup(g, std::move(s.list), std::move(mingens));
}

Subgroup subgroup_from_closed_ranks(const FiniteAbelianGroup& g,
                                    std::vector<std::uint64_t> ranks) {
  std::sort(ranks.begin(), ranks.end());
  ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
  if (ranks.empty() || ranks.front() != 0 || ranks.back() >= g.order()) {
    throw std::logic_error("subgroup_from_closed_ranks: bad rank set");
  }
  std::vector<GroupElement> gens = greedy_generators(g, ranks);
  return Subgroup(g, std::move(ranks), std::move(gens));
}

std::vector<Subgroup> enumerate_subgroups(const FiniteAbelianGroup& g, std::uint64_t cap) {
  if (g.order() > cap) {
    throw CapExceeded("enumerate_subgroups: group order exceeds cap");
  }
  constexpr std::size_t kMaxSubgroups = 200000;

  // Factor indices grouped by prime; a subgroup is the product of its
  // intersections with the primary components.
  std::map<std::int64_t, std::vector<std::size_t>> components;
  for (std::size_t i = 0; i < g.factor_count(); ++i) {
    components[factorize(g.orders()[i])[0].first].push_back(i);
  }

  std::vector<std::vector<std::uint64_t>> combined{{0}};
  for (const auto& [prime, idx] : components) {
    // All ranks supported on this component's coordinates.
    std::vector<std::uint64_t> universe{0};
    for (std::size_t i : idx) {
      const std::uint64_t n = static_cast<std::uint64_t>(g.orders()[i]);
      std::vector<std::int64_t> unit(g.factor_count(), 0);
      unit[i] = 1;
      const std::uint64_t stride = g.rank_of(GroupElement{std::move(unit)});
      std::vector<std::uint64_t> next;
      next.reserve(universe.size() * n);
      for (std::uint64_t base : universe) {
        for (std::uint64_t v = 0; v < n; ++v) next.push_back(base + v * stride);
      }
      universe = std::move(next);
    }

    // Breadth-first walk of the component's subgroup lattice.
    std::set<std::vector<std::uint64_t>> seen;
    std::vector<std::vector<std::uint64_t>> queue{{0}};
    seen.insert(queue.front());
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const std::vector<std::uint64_t> current = queue[qi];
      for (std::uint64_t cand : universe) {
        if (std::binary_search(current.begin(), current.end(), cand)) continue;
        RankSet s(g.order());
        for (std::uint64_t r : current) {
          if (!s.bit[r]) {
            s.bit[r] = 1;
            s.list.push_back(r);
          }
        }
        closure_extend(g, s, g.element_at(cand));
        std::sort(s.list.begin(), s.list.end());
        if (seen.insert(s.list).second) {
          queue.push_back(std::move(s.list));
          if (seen.size() > kMaxSubgroups) {
            throw CapExceeded("enumerate_subgroups: subgroup count exceeds safety cap");
          }
        }
      }
    }

    std::vector<std::vector<std::uint64_t>> merged;
    merged.reserve(combined.size() * seen.size());
    for (const auto& a : combined) {
      for (const auto& b : seen) {
        std::vector<std::uint64_t> m;
        m.reserve(a.size() * b.size());
        // Components live on disjoint coordinates, so ranks add directly.
        for (std::uint64_t ra : a) {
          for (std::uint64_t rb : b) m.push_back(ra + rb);
        }
        std::sort(m.begin(), m.end());
        merged.push_back(std::move(m));
      }
    }
    if (merged.size() > kMaxSubgroups) {
      throw CapExceeded("enumerate_subgroups: subgroup count exceeds safety cap");
    }
    combined = std::move(merged);
  }

  std::sort(combined.begin(), combined.end());
  std::vector<Subgroup> out;
  out.reserve(combined.size());
  for (auto& ranks : combined) out.push_back(subgroup_from_closed_ranks(g, std::move(ranks)));
  return out;
}

Subgroup doubling_image(const FiniteAbelianGroup& g) {
  std::vector<char> seen(g.order(), 0);
  std::vector<std::uint64_t> ranks;
  for (std::uint64_t r = 0; r < g.order(); ++r) {
    const std::uint64_t d = g.rank_of(g.scale(2, g.element_at(r)));
    if (!seen[d]) {
      seen[d] = 1;
      ranks.push_back(d);
    }
  }
  return subgroup_from_closed_ranks(g, std::move(ranks));
}

Subgroup two_torsion(const FiniteAbelianGroup& g) {
  std::vector<std::uint64_t> ranks;
  for (std::uint64_t r = 0; r < g.order(); ++r) {
    if (g.rank_of(g.scale(2, g.element_at(r))) == 0) ranks.push_back(r);
  }
  return subgroup_from_closed_ranks(g, std::move(ranks));
}

GroupElement QuotientDecomposition::project(const GroupElement& x) const {
  const auto& qorders = quotient.orders();
  std::vector<std::int64_t> c(qorders.size());
  for (std::size_t t = 0; t < qorders.size(); ++t) {
    __int128 acc = 0;
    for (std::size_t j = 0; j < projection[t].size(); ++j) {
      acc += static_cast<__int128>(projection[t][j]) * x.coords[j];
    }
    c[t] = static_cast<std::int64_t>(acc % qorders[t]);
    if (c[t] < 0) c[t] += qorders[t];
  }
  return GroupElement{std::move(c)};
}

GroupElement QuotientDecomposition::lift(const GroupElement& q) const {
  const auto& porders = parent.orders();
  std::vector<std::int64_t> c(porders.size());
  for (std::size_t j = 0; j < porders.size(); ++j) {
    __int128 acc = 0;
    for (std::size_t t = 0; t < section[j].size(); ++t) {
      acc += static_cast<__int128>(section[j][t]) * q.coords[t];
    }
    c[j] = static_cast<std::int64_t>(acc % porders[j]);
    if (c[j] < 0) c[j] += porders[j];
  }
  return GroupElement{std::move(c)};
}

QuotientDecomposition quotient(const FiniteAbelianGroup& g, const Subgroup& k) {
  if (k.parent() != g) throw std::invalid_argument("quotient: subgroup of a different group");
  const std::size_t r = g.factor_count();
  if (r == 0) {
    return QuotientDecomposition{g, FiniteAbelianGroup::make({}), {}, {}};
  }

  const auto& gens = k.generators();
  IntMatrix a(r, std::vector<Int>(r + gens.size(), 0));
  for (std::size_t i = 0; i < r; ++i) a[i][i] = g.orders()[i];
  for (std::size_t t = 0; t < gens.size(); ++t) {
    for (std::size_t i = 0; i < r; ++i) a[i][r + t] = gens[t].coords[i];
  }
  const SmithDecomposition snf = smith_normal_form(std::move(a));

  Int index_check = 1;
  for (const Int& d : snf.diagonal) index_check *= d;
  if (index_check != Int(static_cast<unsigned long>(g.order() / k.size()))) {
    throw std::logic_error("quotient: invariant factor product mismatch");
  }

  struct QFactor {
    std::int64_t prime;
    int exp;
    std::int64_t value;
    std::size_t src;
    Int crt_coeff;  // CRT basis coefficient inside Z(d_src)
  };
  std::vector<QFactor> qfactors;
  for (std::size_t i = 0; i < snf.diagonal.size(); ++i) {
    const Int& d = snf.diagonal[i];
    if (d <= 1) continue;
    if (!d.fits_slong_p()) throw std::logic_error("quotient: invariant factor out of range");
    const std::int64_t dv = d.get_si();
    for (const auto& [p, e] : factorize(dv)) {
      std::int64_t q = 1;
      for (int j = 0; j < e; ++j) q *= p;
      Int coeff;
      if (q == dv) {
        coeff = 1;
      } else {
        const std::int64_t m = dv / q;
        coeff = Int(m) * Int(mod_inverse(m % q, q)) % Int(dv);
      }
      qfactors.push_back({p, e, q, i, coeff});
    }
  }
  std::stable_sort(qfactors.begin(), qfactors.end(), [](const QFactor& a, const QFactor& b) {
    return a.prime != b.prime ? a.prime < b.prime : a.exp < b.exp;
  });

  std::vector<std::int64_t> qorders;
  qorders.reserve(qfactors.size());
  for (const auto& f : qfactors) qorders.push_back(f.value);
  FiniteAbelianGroup quot = FiniteAbelianGroup::make(qorders);

  QuotientDecomposition out{g, std::move(quot), {}, {}};
  out.projection.assign(qfactors.size(), std::vector<std::int64_t>(r, 0));
  for (std::size_t t = 0; t < qfactors.size(); ++t) {
    const auto& f = qfactors[t];
    for (std::size_t j = 0; j < r; ++j) {
      Int v = snf.row_ops[f.src][j] % Int(f.value);
      if (v < 0) v += f.value;
      out.projection[t][j] = v.get_si();
    }
  }
  out.section.assign(r, std::vector<std::int64_t>(qfactors.size(), 0));
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t t = 0; t < qfactors.size(); ++t) {
      const auto& f = qfactors[t];
      Int v = snf.row_ops_inv[j][f.src] * f.crt_coeff % Int(g.orders()[j]);
      if (v < 0) v += g.orders()[j];
      out.section[j][t] = v.get_si();
    }
  }

  // Section must split the projection, and the subgroup must die in the
  // quotient; both certify the transform bookkeeping end to end.
  for (std::size_t t = 0; t < qfactors.size(); ++t) {
    std::vector<std::int64_t> unit(qfactors.size(), 0);
    unit[t] = 1;
    const GroupElement e = out.quotient.element(unit);
    if (out.project(out.lift(e)) != e) {
      throw std::logic_error("quotient: section does not split the projection");
    }
  }
  for (const auto& gen : gens) {
    if (out.quotient.rank_of(out.project(gen)) != 0) {
      throw std::logic_error("quotient: subgroup generator survives projection");
    }
  }
  return out;
}

}  // namespace haarshift
