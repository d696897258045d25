#include "haarshift/heyde.hpp"

#include "haarshift/arith.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

namespace haarshift {

void HeydeInstance::validate() const {
  if (alpha.domain() != group || alpha.codomain() != group) {
    throw std::invalid_argument("HeydeInstance: alpha is not an endomorphism of the group");
  }
  if (mu1.group() != group || mu2.group() != group) {
    throw std::invalid_argument("HeydeInstance: distribution lives on a different group");
  }
  if (!is_automorphism(alpha)) {
    throw std::invalid_argument("HeydeInstance: alpha is not an automorphism");
  }
}

namespace {

// Transform values prepared for the dual-square scan. Exact cyclotomic
// values are always present; when every value fits a common denominator
// with comfortable integer headroom, parallel int64 numerator vectors are
// kept as a fast path (the arithmetic stays exact, just unboxed).
struct TransformData {
  std::vector<Cyclotomic> values;
  bool int_path = false;
  std::vector<std::vector<std::int64_t>> numerators;
  Int max_abs = 0;
};

// Integer reduction rows for monomials z^(d), ..., z^(2d-2) of the value
// field; cyclotomic moduli are integral, so the rows are too.
struct IntRows {
  bool ok = false;
  std::vector<std::vector<std::int64_t>> rows;
  Int max_abs = 1;
};

IntRows build_int_rows(const CyclotomicField& field) {
  IntRows out;
  const std::size_t d = field.degree();
  if (d == 0) return out;
  std::vector<Int> base(d);
  for (std::size_t j = 0; j < d; ++j) {
    const Rational& c = field.modulus()[j];
    if (!is_integer(c)) return out;
    base[j] = -c.get_num();
  }
  std::vector<std::vector<Int>> rows;
  rows.push_back(base);
  for (std::size_t k = 1; k + 1 < d; ++k) {
    std::vector<Int> next(d, 0);
    const Int wrap = rows.back()[d - 1];
    for (std::size_t j = d - 1; j > 0; --j) next[j] = rows.back()[j - 1];
    if (wrap != 0) {
      for (std::size_t j = 0; j < d; ++j) next[j] += wrap * rows.front()[j];
    }
    rows.push_back(std::move(next));
  }
  out.rows.reserve(rows.size());
  for (const auto& row : rows) {
    std::vector<std::int64_t> r64(d);
    for (std::size_t j = 0; j < d; ++j) {
      if (!row[j].fits_slong_p()) return out;
      r64[j] = row[j].get_si();
      Int a = abs(row[j]);
      if (a > out.max_abs) out.max_abs = a;
    }
    out.rows.push_back(std::move(r64));
  }
  out.ok = true;
  return out;
}

TransformData make_transform_data(const std::vector<Cyclotomic>& values) {
  TransformData td;
  td.values = values;
  if (values.empty()) return td;
  const std::size_t d = values.front().coords().size();

  Int denom = 1;
  for (const auto& v : values) {
    for (const auto& c : v.coords()) denom = lcm(denom, c.get_den());
  }
  if (!denom.fits_slong_p()) return td;

  td.numerators.assign(values.size(), std::vector<std::int64_t>(d, 0));
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      Int num = values[i].coords()[j].get_num() * (denom / values[i].coords()[j].get_den());
      if (!num.fits_slong_p()) return td;
      td.numerators[i][j] = num.get_si();
      Int a = abs(num);
      if (a > td.max_abs) td.max_abs = a;
    }
  }
  td.int_path = true;
  return td;
}

// out = a * b reduced, all int64; bounds are certified by the caller.
void mul_reduce_int(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                    const IntRows& rows, std::vector<std::int64_t>& tmp,
                    std::vector<std::int64_t>& out) {
  const std::size_t d = a.size();
  tmp.assign(2 * d - 1, 0);
  for (std::size_t i = 0; i < d; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < d; ++j) tmp[i + j] += a[i] * b[j];
  }
  out.assign(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(d));
  for (std::size_t k = d; k < tmp.size(); ++k) {
    if (tmp[k] == 0) continue;
    const auto& row = rows.rows[k - d];
    for (std::size_t j = 0; j < d; ++j) out[j] += tmp[k] * row[j];
  }
}

SymmetryVerdict equation_scan(const FiniteAbelianGroup& g, const TransformData& f1,
                              const TransformData& f2, const Homomorphism& adj) {
  const std::uint64_t n = g.order();
  std::vector<GroupElement> elems;
  elems.reserve(n);
  for (std::uint64_t r = 0; r < n; ++r) elems.push_back(g.element_at(r));

  bool use_int = f1.int_path && f2.int_path;
  IntRows rows;
  if (use_int) {
    rows = build_int_rows(*g.field());
    if (g.field()->degree() >= 2 && !rows.ok) use_int = false;
    if (use_int) {
      // |product coeff| <= d * max1 * max2 * (1 + d * maxrow) must clear
      // int64 with margin; otherwise take the exact rational route.
      const Int d(static_cast<unsigned long>(g.field()->degree()));
      const Int bound = d * f1.max_abs * f2.max_abs * (1 + d * rows.max_abs);
      if (bound >= (Int(1) << 62)) use_int = false;
    }
  }

  std::vector<std::int64_t> tmp, lhs, rhs;
  for (std::uint64_t vr = 1; vr < n; ++vr) {
    const GroupElement& v = elems[vr];
    const std::uint64_t nvr = g.rank_of(g.neg(v));
    // v and -v induce the same condition with the sides swapped, and
    // 2v = 0 makes it trivial.
    if (nvr <= vr) continue;
    const GroupElement av = adj.apply(v);
    for (std::uint64_t ur = 0; ur < n; ++ur) {
      const GroupElement& u = elems[ur];
      const std::uint64_t a = g.rank_of(g.add(u, v));
      const std::uint64_t b = g.rank_of(g.add(u, av));
      const std::uint64_t c = g.rank_of(g.sub(u, v));
      const std::uint64_t d = g.rank_of(g.sub(u, av));
      bool equal;
      if (use_int) {
        mul_reduce_int(f1.numerators[a], f2.numerators[b], rows, tmp, lhs);
        mul_reduce_int(f1.numerators[c], f2.numerators[d], rows, tmp, rhs);
        equal = lhs == rhs;
      } else {
        equal = f1.values[a] * f2.values[b] == f1.values[c] * f2.values[d];
      }
      if (!equal) {
        return SymmetryVerdict{false, VerdictMethod::TransformEquation,
                               std::make_pair(u, v)};
      }
    }
  }
  return SymmetryVerdict{true, VerdictMethod::TransformEquation, std::nullopt};
}

SymmetryVerdict oracle_scan(const FiniteAbelianGroup& g, const Homomorphism& alpha,
                            const Distribution& mu1, const Distribution& mu2) {
  // Sparse joint law of (L1, L2): at most |supp mu1| * |supp mu2| points.
  std::map<std::pair<std::uint64_t, std::uint64_t>, Rational> joint;
  const std::vector<GroupElement> s1 = support(mu1);
  const std::vector<GroupElement> s2 = support(mu2);
  for (const auto& x2 : s2) {
    const Rational& m2 = mu2.mass(x2);
    const GroupElement ax2 = alpha.apply(x2);
    for (const auto& x1 : s1) {
      const std::uint64_t u = g.rank_of(g.add(x1, x2));
      const std::uint64_t w = g.rank_of(g.add(x1, ax2));
      joint[{u, w}] += mu1.mass(x1) * m2;
    }
  }
  for (const auto& [key, val] : joint) {
    const auto& [ur, wr] = key;
    const std::uint64_t nwr = g.rank_of(g.neg(g.element_at(wr)));
    const auto it = joint.find({ur, nwr});
    const bool equal = (it == joint.end()) ? (val == 0) : (val == it->second);
    if (!equal) {
      return SymmetryVerdict{false, VerdictMethod::JointDistribution,
                             std::make_pair(g.element_at(ur), g.element_at(wr))};
    }
  }
  return SymmetryVerdict{true, VerdictMethod::JointDistribution, std::nullopt};
}

void parallel_for(int jobs, std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

SymmetryVerdict heyde_equation_holds(const HeydeInstance& inst) {
  inst.validate();
  const TransformData f1 = make_transform_data(char_fn(inst.mu1).values());
  const TransformData f2 = make_transform_data(char_fn(inst.mu2).values());
  return equation_scan(inst.group, f1, f2, adjoint(inst.alpha));
}

SymmetryVerdict conditional_symmetry_oracle(const HeydeInstance& inst) {
  inst.validate();
  return oracle_scan(inst.group, inst.alpha, inst.mu1, inst.mu2);
}

namespace {

// Single transform value straight from the definition; used only by the
// witness rechecks so they share nothing with the scanning code.
Cyclotomic transform_value_at(const Distribution& mu, const DualElement& y) {
  const auto& g = mu.group();
  Cyclotomic acc = Cyclotomic::zero(g.field());
  for (std::uint64_t r = 0; r < g.order(); ++r) {
    const Rational& m = mu.mass_at_rank(r);
    if (m == 0) continue;
    acc = acc + m * pairing(g, g.element_at(r), y);
  }
  return acc;
}

}  // namespace

bool equation_witness_recheck(const HeydeInstance& inst, const DualElement& u,
                              const DualElement& v) {
  inst.validate();
  const auto& g = inst.group;
  const GroupElement uu = g.element(u.coords);
  const GroupElement vv = g.element(v.coords);
  const GroupElement av = adjoint(inst.alpha).apply(vv);
  const Cyclotomic lhs = transform_value_at(inst.mu1, g.add(uu, vv)) *
                         transform_value_at(inst.mu2, g.add(uu, av));
  const Cyclotomic rhs = transform_value_at(inst.mu1, g.sub(uu, vv)) *
                         transform_value_at(inst.mu2, g.sub(uu, av));
  return lhs == rhs;
}

bool oracle_witness_recheck(const HeydeInstance& inst, const GroupElement& u,
                            const GroupElement& w) {
  inst.validate();
  const auto& g = inst.group;
  const GroupElement uu = g.element(u.coords);
  const GroupElement ww = g.element(w.coords);
  const GroupElement nw = g.neg(ww);
  Rational at_w(0), at_neg_w(0);
  for (std::uint64_t r = 0; r < g.order(); ++r) {
    const Rational& m2 = inst.mu2.mass_at_rank(r);
    if (m2 == 0) continue;
    const GroupElement x2 = g.element_at(r);
    const GroupElement x1 = g.sub(uu, x2);
    const GroupElement l2 = g.add(x1, inst.alpha.apply(x2));
    if (l2 == ww) at_w += inst.mu1.mass(x1) * m2;
    if (l2 == nw) at_neg_w += inst.mu1.mass(x1) * m2;
  }
  return at_w == at_neg_w;
}

EquivalenceReport equivalence_sweep(const FiniteAbelianGroup& g,
                                    const std::vector<Homomorphism>& automorphisms,
                                    const PairSource& pairs, std::size_t trials, int jobs) {
  std::vector<Homomorphism> adjoints;
  adjoints.reserve(automorphisms.size());
  for (const auto& a : automorphisms) {
    if (a.domain() != g || a.codomain() != g || !is_automorphism(a)) {
      throw std::invalid_argument("equivalence_sweep: not an automorphism of the group");
    }
    adjoints.push_back(adjoint(a));
  }

  std::vector<std::pair<Distribution, Distribution>> trial_pairs;
  std::vector<std::pair<TransformData, TransformData>> trial_transforms;
  trial_pairs.reserve(trials);
  trial_transforms.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    trial_pairs.push_back(pairs(t));
    const auto& [m1, m2] = trial_pairs.back();
    if (m1.group() != g || m2.group() != g) {
      throw std::invalid_argument("equivalence_sweep: pair source left the group");
    }
    trial_transforms.emplace_back(make_transform_data(char_fn(m1).values()),
                                  make_transform_data(char_fn(m2).values()));
  }

  const std::size_t total = automorphisms.size() * trials;
  std::vector<std::pair<char, char>> verdicts(total);
  parallel_for(jobs, total, [&](std::size_t i) {
    const std::size_t ai = i / trials;
    const std::size_t ti = i % trials;
    const SymmetryVerdict eq = equation_scan(g, trial_transforms[ti].first,
                                             trial_transforms[ti].second, adjoints[ai]);
    const SymmetryVerdict oracle = oracle_scan(g, automorphisms[ai], trial_pairs[ti].first,
                                               trial_pairs[ti].second);
    verdicts[i] = {eq.symmetric ? 1 : 0, oracle.symmetric ? 1 : 0};
  });

  EquivalenceReport report;
  report.instances = total;
  for (std::size_t i = 0; i < total; ++i) {
    const auto& [eq, oracle] = verdicts[i];
    if (oracle) ++report.symmetric_count;
    if (eq != oracle) {
      report.discrepancies.push_back(EquivalenceDiscrepancy{
          i / trials, i % trials, eq != 0, oracle != 0});
    }
  }
  return report;
}

bool haar_pair_equation_condition(const FiniteAbelianGroup& g, const Homomorphism& alpha) {
  if (!alpha.is_endomorphism() || alpha.domain() != g) {
    throw std::invalid_argument("haar_pair_equation_condition: not an endomorphism of g");
  }
  const Homomorphism minus = id_plus_minus(alpha).second;
  const Subgroup doubled = doubling_image(g);
  const Subgroup minus_image = image_subgroup(minus);
  for (std::uint64_t r : doubled.ranks()) {
    if (!minus_image.contains_rank(r)) return false;
  }
  return true;
}

bool subgroup_haar_pair_condition(const Subgroup& k, const Homomorphism& alpha) {
  const auto& g = k.parent();
  if (!alpha.is_endomorphism() || alpha.domain() != g) {
    throw std::invalid_argument("subgroup_haar_pair_condition: not an endomorphism of g");
  }
  const auto [plus, minus] = id_plus_minus(alpha);
  if (!is_automorphism(plus)) {
    throw std::domain_error("subgroup_haar_pair_condition: I + alpha is not an automorphism");
  }
  // K inside (I+alpha)^{-1}((I-alpha)(K)) is equivalent to
  // (I+alpha)(K) inside (I-alpha)(K); generators suffice on the left.
  const Subgroup minus_k = image_of_subgroup(minus, k);
  for (const auto& gen : k.generators()) {
    if (!minus_k.contains(plus.apply(gen))) return false;
  }
  return true;
}

bool shifted_haar_pair_condition(const Subgroup& k, const GroupElement& x1,
                                 const GroupElement& x2, const Homomorphism& alpha) {
  const auto& g = k.parent();
  if (!alpha.is_endomorphism() || alpha.domain() != g) {
    throw std::invalid_argument("shifted_haar_pair_condition: not an endomorphism of g");
  }
  const auto [plus, minus] = id_plus_minus(alpha);
  if (!is_automorphism(plus) || !is_automorphism(minus)) {
    throw std::domain_error(
        "shifted_haar_pair_condition: I + alpha and I - alpha must be automorphisms");
  }
  if (!(image_of_subgroup(alpha, k) == k)) {
    throw std::domain_error("shifted_haar_pair_condition: subgroup is not alpha-invariant");
  }
  const GroupElement combo = g.add(g.element(x1.coords), alpha.apply(g.element(x2.coords)));
  return k.contains(g.scale(2, combo));
}

namespace {

bool indicator_satisfies_equation(const FiniteAbelianGroup& g, const Homomorphism& adj,
                                  const std::vector<char>& in_e, bool use_fast) {
  if (use_fast) {
    // For a subgroup indicator, the dual-square identity collapses to:
    // whenever (I - A)v lies in the set, so does 2v.
    const auto [plus, minus] = id_plus_minus(adj);
    for (std::uint64_t vr = 0; vr < g.order(); ++vr) {
      const GroupElement v = g.element_at(vr);
      if (!in_e[g.rank_of(minus.apply(v))]) continue;
      if (!in_e[g.rank_of(g.scale(2, v))]) return false;
    }
    return true;
  }
  for (std::uint64_t vr = 1; vr < g.order(); ++vr) {
    const GroupElement v = g.element_at(vr);
    if (g.rank_of(g.neg(v)) <= vr) continue;
    const GroupElement av = adj.apply(v);
    for (std::uint64_t ur = 0; ur < g.order(); ++ur) {
      const GroupElement u = g.element_at(ur);
      const bool lhs = in_e[g.rank_of(g.add(u, v))] && in_e[g.rank_of(g.add(u, av))];
      const bool rhs = in_e[g.rank_of(g.sub(u, v))] && in_e[g.rank_of(g.sub(u, av))];
      if (lhs != rhs) return false;
    }
  }
  return true;
}

}  // namespace

IndicatorSolutions enumerate_zero_one_solutions(const FiniteAbelianGroup& g,
                                                const Homomorphism& alpha,
                                                const IndicatorSolutionOptions& options) {
  if (!alpha.is_endomorphism() || alpha.domain() != g) {
    throw std::invalid_argument("enumerate_zero_one_solutions: not an endomorphism of g");
  }
  const Homomorphism adj = adjoint(alpha);
  const std::vector<Subgroup> lattice = enumerate_subgroups(g, options.subgroup_cap);

  IndicatorSolutions out;
  out.group_odd_order = g.odd_order();
  out.alpha_admissible = is_admissible(alpha);
  const std::uint64_t pair_count = g.order() * g.order();
  out.used_fast_criterion = pair_count > options.brute_force_pair_limit;

  std::vector<char> in_e(g.order(), 0);
  for (const Subgroup& e : lattice) {
    std::fill(in_e.begin(), in_e.end(), 0);
    for (std::uint64_t r : e.ranks()) in_e[r] = 1;
    if (!indicator_satisfies_equation(g, adj, in_e, out.used_fast_criterion)) continue;
    if (out.group_odd_order && out.alpha_admissible) {
      if (!(image_of_subgroup(adj, e) == e)) {
        throw std::logic_error(
            "enumerate_zero_one_solutions: solution is not invariant under the adjoint");
      }
    }
    out.solutions.push_back(e);
  }
  return out;
}

RecognitionReport verify_haar_recognition(const FiniteAbelianGroup& g, const Homomorphism& alpha,
                                          const PairSource& extra_pairs, std::size_t trials,
                                          const RecognitionOptions& options) {
  if (!alpha.is_endomorphism() || alpha.domain() != g) {
    throw std::invalid_argument("verify_haar_recognition: not an endomorphism of g");
  }
  RecognitionReport report;
  report.hypotheses_hold = g.odd_order() && is_admissible(alpha);
  if (!report.hypotheses_hold && !options.exploratory) {
    throw std::domain_error(
        "verify_haar_recognition: hypotheses failed (odd order and admissible alpha required); "
        "set exploratory to probe anyway");
  }

  // Tasks are kept as descriptors and the distributions are rebuilt where
  // needed, so memory stays O(|g|) however many pairs the sweep visits.
  struct Task {
    const char* family;
    std::size_t index;
    // structured = one of the coset families (a)/(b), with the pair being
    // (shift of haar on lattice[subgroup_index] by r1, same by r2);
    // otherwise the pair is provided[index].
    bool structured;
    std::size_t subgroup_index;
    std::uint64_t r1;
    std::uint64_t r2;
  };

  const std::vector<Subgroup> lattice = enumerate_subgroups(g);
  std::vector<char> alpha_invariant(lattice.size(), 0);
  for (std::size_t ki = 0; ki < lattice.size(); ++ki) {
    alpha_invariant[ki] = image_of_subgroup(alpha, lattice[ki]) == lattice[ki] ? 1 : 0;
  }
  // The shift condition is only defined when both offsets invert; under
  // exploratory hypotheses it may not be, and those checks are skipped.
  const auto offsets = id_plus_minus(alpha);
  const bool offsets_invertible =
      is_automorphism(offsets.first) && is_automorphism(offsets.second);

  std::vector<Task> tasks;
  for (std::size_t ki = 0; ki < lattice.size(); ++ki) {
    const Subgroup& k = lattice[ki];
    const char* family = k.size() == 1 ? "point-mass" : "haar-shift";
    // One representative per coset of k; for the trivial subgroup this is
    // every element, which makes family (a) all point-mass pairs.
    std::vector<std::uint64_t> reps;
    std::vector<char> seen(g.order(), 0);
    for (std::uint64_t r = 0; r < g.order(); ++r) {
      if (seen[r]) continue;
      reps.push_back(r);
      const GroupElement x = g.element_at(r);
      for (std::uint64_t kr : k.ranks()) {
        seen[g.rank_of(g.add(x, g.element_at(kr)))] = 1;
      }
    }
    std::size_t idx = 0;
    for (std::uint64_t r1 : reps) {
      for (std::uint64_t r2 : reps) {
        tasks.push_back(Task{family, idx++, true, ki, r1, r2});
      }
    }
  }
  std::vector<std::pair<Distribution, Distribution>> provided;
  provided.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    provided.push_back(extra_pairs(t));
    if (provided.back().first.group() != g || provided.back().second.group() != g) {
      throw std::invalid_argument("verify_haar_recognition: pair source left the group");
    }
    tasks.push_back(Task{"provided", t, false, 0, 0, 0});
  }

  const auto pair_for = [&](const Task& task) -> std::pair<Distribution, Distribution> {
    if (!task.structured) return provided[task.index];
    const Distribution base = haar_on_subgroup(lattice[task.subgroup_index]);
    return {shift(base, g.element_at(task.r1)), shift(base, g.element_at(task.r2))};
  };

  std::vector<char> symmetric(tasks.size(), 0);
  parallel_for(options.jobs, tasks.size(), [&](std::size_t i) {
    const auto [m1, m2] = pair_for(tasks[i]);
    symmetric[i] = oracle_scan(g, alpha, m1, m2).symmetric ? 1 : 0;
  });

  report.pairs_checked = tasks.size();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Task& task = tasks[i];
    const auto [mu1, mu2] = pair_for(task);
    if (!symmetric[i]) {
      ++report.asymmetric_pairs;
      if (task.structured && options.converse_sweep && offsets_invertible &&
          alpha_invariant[task.subgroup_index]) {
        // The shift condition must be decisive for structured pairs.
        ++report.converse_pairs_checked;
        if (shifted_haar_pair_condition(lattice[task.subgroup_index], g.element_at(task.r1),
                                        g.element_at(task.r2), alpha)) {
          report.failures.push_back(RecognitionReport::Failure{
              task.family, task.index, "shift condition holds but the pair is asymmetric"});
        }
      }
      continue;
    }
    ++report.symmetric_pairs;

    const auto d1 = is_haar_shift(mu1);
    const auto d2 = is_haar_shift(mu2);
    if (!d1 || !d2) {
      report.failures.push_back(RecognitionReport::Failure{
          task.family, task.index, "symmetric pair is not a pair of subgroup Haar shifts"});
      continue;
    }
    if (!(d1->subgroup == d2->subgroup)) {
      report.failures.push_back(RecognitionReport::Failure{
          task.family, task.index, "symmetric pair uses two different subgroups"});
      continue;
    }
    const Subgroup& k = d1->subgroup;
    if (!(image_of_subgroup(alpha, k) == k)) {
      report.failures.push_back(RecognitionReport::Failure{
          task.family, task.index, "recognized subgroup is not alpha-invariant"});
      continue;
    }
    // The symmetrized distributions must be exactly the subgroup Haar
    // measure (their carrier).
    const Distribution haar_k = haar_on_subgroup(k);
    if (!(convolve(mu1, reflect(mu1)) == haar_k) ||
        !(convolve(mu2, reflect(mu2)) == haar_k)) {
      report.failures.push_back(RecognitionReport::Failure{
          task.family, task.index, "symmetrization does not match the recognized carrier"});
      continue;
    }
    if (report.hypotheses_hold &&
        !shifted_haar_pair_condition(k, d1->shift, d2->shift, alpha)) {
      report.failures.push_back(RecognitionReport::Failure{
          task.family, task.index, "recognized shifts violate the shift condition"});
      continue;
    }
    ++report.recognized_decompositions;
    if (task.structured && options.converse_sweep && offsets_invertible &&
        alpha_invariant[task.subgroup_index]) {
      ++report.converse_pairs_checked;
      if (!shifted_haar_pair_condition(lattice[task.subgroup_index], g.element_at(task.r1),
                                       g.element_at(task.r2), alpha)) {
        report.failures.push_back(RecognitionReport::Failure{
            task.family, task.index, "symmetric structured pair fails the shift condition"});
      }
    }
  }
  return report;
}

IterationReport iteration_identities_check(const HeydeInstance& inst, int depth) {
  inst.validate();
  depth = std::clamp(depth, 1, 10);
  const auto& g = inst.group;
  IterationReport report;

  const std::vector<Cyclotomic> f1 = char_fn(inst.mu1).values();
  const std::vector<Cyclotomic> f2 = char_fn(inst.mu2).values();

  const SymmetryVerdict base = heyde_equation_holds(inst);
  if (!base.symmetric) {
    report.precondition_failure = "transform identity fails for the instance";
    return report;
  }
  for (std::uint64_t r = 0; r < g.order(); ++r) {
    const std::uint64_t nr = g.rank_of(g.neg(g.element_at(r)));
    if (!(f1[r] == f1[nr]) || !(f2[r] == f2[nr])) {
      report.precondition_failure = "transforms are not real and even";
      return report;
    }
  }
  const Homomorphism adj = adjoint(inst.alpha);
  const auto [plus, minus] = id_plus_minus(adj);
  if (!is_automorphism(minus)) {
    report.precondition_failure = "I - adjoint(alpha) is not an automorphism";
    return report;
  }
  report.preconditions_hold = true;

  const Homomorphism minus_inv = invert(minus);
  const Homomorphism word_b = compose(plus, minus_inv);
  const Homomorphism word_c =
      compose(Homomorphism::scalar(g, 2), compose(adj, minus_inv));
  const Homomorphism word_d = compose(Homomorphism::scalar(g, 2), minus_inv);

  struct Factor {
    int which;  // 1 or 2
    Homomorphism word;
  };
  const auto expand = [&](const std::vector<Factor>& fs) {
    std::vector<Factor> out;
    out.reserve(fs.size() * 2);
    for (const auto& f : fs) {
      if (f.which == 1) {
        out.push_back(Factor{1, compose(word_b, f.word)});
        out.push_back(Factor{2, compose(word_c, f.word)});
      } else {
        out.push_back(Factor{1, compose(word_d, f.word)});
        out.push_back(Factor{2, compose(word_b, f.word)});
      }
    }
    return out;
  };
  const auto holds_everywhere = [&](const std::vector<Cyclotomic>& target,
                                    const std::vector<Factor>& fs,
                                    std::optional<DualElement>& witness) {
    for (std::uint64_t r = 0; r < g.order(); ++r) {
      const DualElement y = g.element_at(r);
      Cyclotomic prod = Cyclotomic::one(g.field());
      for (const auto& f : fs) {
        const std::uint64_t wr = g.rank_of(f.word.apply(y));
        prod = prod * (f.which == 1 ? f1[wr] : f2[wr]);
      }
      if (!(prod == target[r])) {
        witness = y;
        return false;
      }
    }
    return true;
  };

  std::vector<Factor> exp1{Factor{1, Homomorphism::identity(g)}};
  std::vector<Factor> exp2{Factor{2, Homomorphism::identity(g)}};
  for (int level = 1; level <= depth; ++level) {
    exp1 = expand(exp1);
    exp2 = expand(exp2);
    if (!holds_everywhere(f1, exp1, report.witness) ||
        !holds_everywhere(f2, exp2, report.witness)) {
      report.expansions_hold = false;
      if (level == 1) report.base_identities_hold = false;
      return report;
    }
    if (level == 1) report.base_identities_hold = true;
    report.verified_depth = level;
  }
  report.expansions_hold = true;
  return report;
}

TowerReport truncation_tower_sweep(const std::vector<std::int64_t>& primes, int max_level,
                                   const std::vector<std::int64_t>& scalars, TowerCheck check,
                                   const IndicatorSolutionOptions& options) {
  if (primes.empty()) throw std::invalid_argument("truncation_tower_sweep: no primes");
  if (max_level < 1) throw std::invalid_argument("truncation_tower_sweep: max_level must be >= 1");
  std::vector<std::pair<std::int64_t, std::int64_t>> plan;  // (prime, scalar)
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const std::int64_t p = primes[i];
    const auto f = factorize(p);
    if (p <= 2 || f.size() != 1 || f[0].second != 1) {
      throw std::invalid_argument("truncation_tower_sweep: entries must be odd primes");
    }
    std::int64_t s;
    if (scalars.size() == 1) {
      s = scalars[0];
    } else if (scalars.size() == primes.size()) {
      s = scalars[i];
    } else {
      throw std::invalid_argument(
          "truncation_tower_sweep: need one scalar per prime or a single broadcast scalar");
    }
    plan.emplace_back(p, s);
  }
  std::sort(plan.begin(), plan.end());
  for (std::size_t i = 1; i < plan.size(); ++i) {
    if (plan[i].first == plan[i - 1].first) {
      throw std::invalid_argument("truncation_tower_sweep: primes must be distinct");
    }
  }

  TowerReport report;
  std::vector<FiniteAbelianGroup> groups;
  for (int level = 1; level <= max_level; ++level) {
    std::vector<std::int64_t> orders;
    std::vector<std::int64_t> diag;
    for (const auto& [p, s] : plan) {
      std::int64_t pe = 1;
      for (int i = 0; i < level; ++i) pe *= p;
      orders.push_back(pe);
      diag.push_back(s);
    }
    const FiniteAbelianGroup g = FiniteAbelianGroup::make(orders);
    const Homomorphism alpha = Homomorphism::diagonal(g, diag);
    const auto [plus, minus] = id_plus_minus(alpha);

    TowerLayer layer;
    layer.level = level;
    layer.orders = g.orders();
    layer.alpha_automorphism = is_automorphism(alpha);
    layer.plus_automorphism = is_automorphism(plus);
    layer.minus_automorphism = is_automorphism(minus);
    if (check == TowerCheck::IndicatorSolutions) {
      const IndicatorSolutions sols = enumerate_zero_one_solutions(g, alpha, options);
      for (const auto& s : sols.solutions) layer.solution_ranks.push_back(s.ranks());
    }
    report.layers.push_back(std::move(layer));
    groups.push_back(g);
  }

  report.admissible_at_all_layers = true;
  for (const auto& layer : report.layers) {
    if (!layer.alpha_automorphism || !layer.plus_automorphism || !layer.minus_automorphism) {
      report.admissible_at_all_layers = false;
    }
  }

  if (check == TowerCheck::IndicatorSolutions) {
    for (std::size_t m = 1; m < groups.size(); ++m) {
      const FiniteAbelianGroup& hi = groups[m];
      const FiniteAbelianGroup& lo = groups[m - 1];
      for (const auto& sol : report.layers[m].solution_ranks) {
        std::vector<std::uint64_t> projected;
        projected.reserve(sol.size());
        for (std::uint64_t r : sol) {
          const GroupElement x = hi.element_at(r);
          std::vector<std::int64_t> c(x.coords.size());
          for (std::size_t i = 0; i < c.size(); ++i) c[i] = x.coords[i] % lo.orders()[i];
          projected.push_back(lo.rank_of(lo.element(c)));
        }
        std::sort(projected.begin(), projected.end());
        projected.erase(std::unique(projected.begin(), projected.end()), projected.end());
        const auto& lower = report.layers[m - 1].solution_ranks;
        if (std::find(lower.begin(), lower.end(), projected) == lower.end()) {
          report.projections_consistent = false;
        }
      }
    }
  }
  return report;
}

}  // namespace haarshift
