#include "haarshift/duality.hpp"

namespace haarshift {

std::int64_t pairing_exponent(const FiniteAbelianGroup& g, const GroupElement& x,
                              const DualElement& y) {
  const std::int64_t n = g.exponent();
  const auto& orders = g.orders();
  if (x.coords.size() != orders.size() || y.coords.size() != orders.size()) {
    throw std::invalid_argument("pairing_exponent: coordinate count mismatch");
  }
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const std::int64_t weight = n / orders[i];
    acc = static_cast<std::int64_t>(
        (acc + static_cast<__int128>(x.coords[i]) * y.coords[i] % n * weight) % n);
  }
  return acc;
}

Cyclotomic pairing(const FiniteAbelianGroup& g, const GroupElement& x, const DualElement& y) {
  return root_of_unity(g.field(), pairing_exponent(g, x, y));
}

Subgroup annihilator(const FiniteAbelianGroup& g, const Subgroup& k) {
  if (k.parent() != g) throw std::invalid_argument("annihilator: subgroup of a different group");
  std::vector<std::uint64_t> ranks;
  for (std::uint64_t r = 0; r < g.order(); ++r) {
    const DualElement y = g.element_at(r);
    bool kills = true;
    for (const auto& gen : k.generators()) {
      if (pairing_exponent(g, gen, y) != 0) {
        kills = false;
        break;
      }
    }
    if (kills) ranks.push_back(r);
  }
  return subgroup_from_closed_ranks(g, std::move(ranks));
}

CharacteristicFunction::CharacteristicFunction(FiniteAbelianGroup group,
                                               std::vector<Cyclotomic> values)
    : group_(std::move(group)), values_(std::move(values)) {
  if (values_.size() != group_.order()) {
    throw std::invalid_argument("CharacteristicFunction: value count mismatch");
  }
  for (const auto& v : values_) {
    if (v.field()->conductor() != group_.exponent()) {
      throw std::invalid_argument("CharacteristicFunction: value in wrong field");
    }
  }
  if (!(values_[0] == Cyclotomic::one(group_.field()))) {
    throw std::invalid_argument("CharacteristicFunction: value at zero is not 1");
  }
  for (std::uint64_t r = 0; r < values_.size(); ++r) {
    const std::uint64_t nr = group_.rank_of(group_.neg(group_.element_at(r)));
    if (nr < r) continue;
    if (!(values_[nr] == values_[r].conj())) {
      throw std::invalid_argument("CharacteristicFunction: negation is not conjugation");
    }
  }
}

const Cyclotomic& CharacteristicFunction::at(const DualElement& y) const {
  return values_[group_.rank_of(group_.element(y.coords))];
}

const Cyclotomic& CharacteristicFunction::at_rank(std::uint64_t rank) const {
  return values_.at(rank);
}

bool CharacteristicFunction::modulus_bounded_by_one() const {
  const Cyclotomic one = Cyclotomic::one(group_.field());
  for (const auto& v : values_) {
    if (!is_real_nonnegative(one - v * v.conj())) return false;
  }
  return true;
}

bool CharacteristicFunction::values_in_zero_one() const {
  const Cyclotomic one = Cyclotomic::one(group_.field());
  for (const auto& v : values_) {
    if (!v.is_zero() && !(v == one)) return false;
  }
  return true;
}

std::vector<std::uint64_t> CharacteristicFunction::unit_ranks() const {
  const Cyclotomic one = Cyclotomic::one(group_.field());
  std::vector<std::uint64_t> out;
  for (std::uint64_t r = 0; r < values_.size(); ++r) {
    if (values_[r] == one) out.push_back(r);
  }
  return out;
}

CharacteristicFunction char_fn(const Distribution& mu) {
  const auto& g = mu.group();
  const std::int64_t n = g.exponent();
  const std::vector<GroupElement> supp = support(mu);
  std::vector<Cyclotomic> values;
  values.reserve(g.order());
  for (std::uint64_t yr = 0; yr < g.order(); ++yr) {
    const DualElement y = g.element_at(yr);
    RationalVector acc(static_cast<std::size_t>(n), Rational(0));
    for (const auto& x : supp) {
      acc[static_cast<std::size_t>(pairing_exponent(g, x, y))] += mu.mass(x);
    }
    values.emplace_back(g.field(), g.field()->reduce(std::move(acc)));
  }
  return CharacteristicFunction(g, std::move(values));
}

Distribution inverse_fourier(const CharacteristicFunction& f) {
  const auto& g = f.group();
  const std::int64_t n = g.exponent();
  RationalVector masses(g.order());
  for (std::uint64_t xr = 0; xr < g.order(); ++xr) {
    const GroupElement x = g.element_at(xr);
    RationalVector acc(static_cast<std::size_t>(n), Rational(0));
    for (std::uint64_t yr = 0; yr < g.order(); ++yr) {
      const Cyclotomic& v = f.at_rank(yr);
      const std::int64_t e = pairing_exponent(g, x, g.element_at(yr));
      const auto& c = v.coords();
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0) continue;
        // Multiplying by the conjugate character rotates basis exponents
        // down by e.
        acc[static_cast<std::size_t>((static_cast<std::int64_t>(k) - e % n + n) % n)] += c[k];
      }
    }
    const Cyclotomic total(g.field(), g.field()->reduce(std::move(acc)));
    const auto q = total.rational_value();
    if (!q) {
      throw std::domain_error("inverse_fourier: transform of a non-rational mass");
    }
    masses[xr] = *q / Rational(static_cast<unsigned long>(g.order()));
    if (sgn(masses[xr]) < 0) {
      throw std::domain_error("inverse_fourier: negative mass");
    }
  }
  Rational total(0);
  for (const auto& m : masses) total += m;
  if (total != 1) throw std::domain_error("inverse_fourier: total mass is not 1");
  return Distribution(g, std::move(masses));
}

Subgroup unit_set(const Distribution& mu) {
  const auto& g = mu.group();
  const std::vector<GroupElement> supp = support(mu);
  std::vector<std::uint64_t> ranks;
  for (std::uint64_t yr = 0; yr < g.order(); ++yr) {
    const DualElement y = g.element_at(yr);
    bool unit = true;
    for (const auto& x : supp) {
      if (pairing_exponent(g, x, y) != 0) {
        unit = false;
        break;
      }
    }
    if (unit) ranks.push_back(yr);
  }
  return subgroup_from_closed_ranks(g, std::move(ranks));
}

}  // namespace haarshift
