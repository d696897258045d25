#include "haarshift/distribution.hpp"

#include <algorithm>
#include <random>

namespace haarshift {

Distribution::Distribution(FiniteAbelianGroup group, RationalVector masses)
    : group_(std::move(group)), masses_(std::move(masses)) {
  if (masses_.size() != group_.order()) {
    throw std::invalid_argument("Distribution: mass vector size does not match group order");
  }
  Rational total(0);
  for (const auto& m : masses_) {
    if (sgn(m) < 0) throw std::invalid_argument("Distribution: negative mass");
    total += m;
  }
  if (total != 1) throw std::invalid_argument("Distribution: total mass is not 1");
}

const Rational& Distribution::mass(const GroupElement& x) const {
  return masses_[group_.rank_of(x)];
}

const Rational& Distribution::mass_at_rank(std::uint64_t rank) const { return masses_.at(rank); }

bool operator==(const Distribution& a, const Distribution& b) {
  return a.group_ == b.group_ && a.masses_ == b.masses_;
}

Distribution haar(const FiniteAbelianGroup& g) {
  RationalVector m(g.order(), Rational(1, static_cast<unsigned long>(g.order())));
  return Distribution(g, std::move(m));
}

Distribution haar_on_subgroup(const Subgroup& k) {
  RationalVector m(k.parent().order(), Rational(0));
  const Rational w(1, static_cast<unsigned long>(k.size()));
  for (std::uint64_t r : k.ranks()) m[r] = w;
  return Distribution(k.parent(), std::move(m));
}

Distribution dirac(const FiniteAbelianGroup& g, const GroupElement& x) {
  RationalVector m(g.order(), Rational(0));
  m[g.rank_of(g.element(x.coords))] = 1;
  return Distribution(g, std::move(m));
}

Distribution shift(const Distribution& mu, const GroupElement& s) {
  const auto& g = mu.group();
  const GroupElement shift_by = g.element(s.coords);
  RationalVector m(g.order(), Rational(0));
  for (std::uint64_t r = 0; r < g.order(); ++r) {
    if (mu.mass_at_rank(r) == 0) continue;
    m[g.rank_of(g.add(g.element_at(r), shift_by))] = mu.mass_at_rank(r);
  }
  return Distribution(g, std::move(m));
}

Distribution reflect(const Distribution& mu) {
  const auto& g = mu.group();
  RationalVector m(g.order(), Rational(0));
  for (std::uint64_t r = 0; r < g.order(); ++r) {
    if (mu.mass_at_rank(r) == 0) continue;
    m[g.rank_of(g.neg(g.element_at(r)))] = mu.mass_at_rank(r);
  }
  return Distribution(g, std::move(m));
}

Distribution convolve(const Distribution& a, const Distribution& b) {
  if (a.group() != b.group()) throw std::invalid_argument("convolve: group mismatch");
  const auto& g = a.group();
  RationalVector m(g.order(), Rational(0));
  for (std::uint64_t r = 0; r < g.order(); ++r) {
    const Rational& ma = a.mass_at_rank(r);
    if (ma == 0) continue;
    const GroupElement x = g.element_at(r);
    for (std::uint64_t s = 0; s < g.order(); ++s) {
      const Rational& mb = b.mass_at_rank(s);
      if (mb == 0) continue;
      m[g.rank_of(g.add(x, g.element_at(s)))] += ma * mb;
    }
  }
  return Distribution(g, std::move(m));
}

std::vector<GroupElement> support(const Distribution& mu) {
  std::vector<GroupElement> out;
  for (std::uint64_t r = 0; r < mu.group().order(); ++r) {
    if (mu.mass_at_rank(r) != 0) out.push_back(mu.group().element_at(r));
  }
  return out;
}

Subgroup minimal_carrier_subgroup(const Distribution& a, const Distribution& b) {
  if (a.group() != b.group()) {
    throw std::invalid_argument("minimal_carrier_subgroup: group mismatch");
  }
  std::vector<GroupElement> gens = support(a);
  for (auto& e : support(b)) gens.push_back(std::move(e));
  return subgroup_generated(a.group(), gens);
}

std::optional<HaarShiftDecomposition> is_haar_shift(const Distribution& mu) {
  const auto& g = mu.group();
  std::vector<std::uint64_t> supp;
  for (std::uint64_t r = 0; r < g.order(); ++r) {
    if (mu.mass_at_rank(r) != 0) supp.push_back(r);
  }
  const Rational uniform(1, static_cast<unsigned long>(supp.size()));
  for (std::uint64_t r : supp) {
    if (mu.mass_at_rank(r) != uniform) return std::nullopt;
  }

  // The support is a coset exactly when its difference set at the least
  // element is a subgroup.
  const GroupElement base = g.element_at(supp.front());
  std::vector<std::uint64_t> diff;
  diff.reserve(supp.size());
  for (std::uint64_t r : supp) diff.push_back(g.rank_of(g.sub(g.element_at(r), base)));
  std::sort(diff.begin(), diff.end());
  // Pairwise closure; supports are small in practice so the quadratic scan
  // is acceptable and exact.
  for (std::uint64_t ra : diff) {
    const GroupElement ea = g.element_at(ra);
    for (std::uint64_t rb : diff) {
      const std::uint64_t sum = g.rank_of(g.add(ea, g.element_at(rb)));
      if (!std::binary_search(diff.begin(), diff.end(), sum)) return std::nullopt;
    }
  }
  return HaarShiftDecomposition{subgroup_from_closed_ranks(g, std::move(diff)), base};
}

Distribution random_distribution(const FiniteAbelianGroup& g, std::uint64_t seed,
                                 std::uint64_t denominator_bound) {
  if (denominator_bound < 1) {
    throw std::invalid_argument("random_distribution: denominator_bound must be >= 1");
  }
  std::mt19937_64 eng(seed);
  std::vector<std::uint64_t> weights(g.order(), 0);
  for (;;) {
    std::uint64_t total = 0;
    for (auto& w : weights) {
      w = eng() % (denominator_bound + 1);
      total += w;
    }
    if (total != 0) break;
  }
  Rational total(0);
  RationalVector m(g.order());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    m[i] = Rational(static_cast<unsigned long>(weights[i]));
    total += m[i];
  }
  for (auto& v : m) v /= total;
  return Distribution(g, std::move(m));
}

Distribution mix(const std::vector<std::pair<Rational, Distribution>>& components) {
  if (components.empty()) throw std::invalid_argument("mix: no components");
  const auto& g = components.front().second.group();
  Rational total(0);
  RationalVector m(g.order(), Rational(0));
  for (const auto& [lambda, mu] : components) {
    if (mu.group() != g) throw std::invalid_argument("mix: group mismatch");
    if (sgn(lambda) < 0) throw std::invalid_argument("mix: negative weight");
    total += lambda;
    for (std::uint64_t r = 0; r < g.order(); ++r) m[r] += lambda * mu.mass_at_rank(r);
  }
  if (total != 1) throw std::invalid_argument("mix: weights do not sum to 1");
  return Distribution(g, std::move(m));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace haarshift
