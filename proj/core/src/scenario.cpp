#include "haarshift/scenario.hpp"

#include "haarshift/gaussian.hpp"
#include "haarshift/heyde.hpp"
#include "haarshift/version.hpp"

#include "preset_data.hpp"

#include <json.hpp>

#include <chrono>
#include <random>

namespace haarshift {

namespace {

using json = nlohmann::ordered_json;

/// Validation failure tied to a scenario field; surfaces as exit code 2.
struct FieldError : std::runtime_error {
  std::string path;
  FieldError(std::string path_, const std::string& message)
      : std::runtime_error(message), path(std::move(path_)) {}
};

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw FieldError(path, message);
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing required field");
  return *it;
}

const json* optional_field(const json& obj, const char* key) {
  if (!obj.is_object()) return nullptr;
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::int64_t as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t as_uint(const json& v, const std::string& path) {
  const std::int64_t n = as_int(v, path);
  if (n < 0) fail(path, "expected a nonnegative integer");
  return static_cast<std::uint64_t>(n);
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) fail(path, "expected a boolean");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

Rational as_rational(const json& v, const std::string& path) {
  if (v.is_number_integer()) return Rational(static_cast<long>(v.get<std::int64_t>()));
  if (v.is_string()) {
    const auto r = parse_rational(v.get<std::string>());
    if (!r) fail(path, "malformed rational; expected \"p/q\"");
    return *r;
  }
  fail(path, "expected an integer or a \"p/q\" string");
}

std::vector<std::int64_t> as_int_vector(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of integers");
  std::vector<std::int64_t> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_int(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::vector<std::int64_t>> as_int_matrix(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of rows");
  std::vector<std::vector<std::int64_t>> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_int_vector(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

RationalMatrix as_rational_matrix(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of rows");
  RationalMatrix out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array()) fail(row_path, "expected an array");
    RationalVector row;
    row.reserve(v[i].size());
    for (std::size_t j = 0; j < v[i].size(); ++j) {
      row.push_back(as_rational(v[i][j], row_path + "[" + std::to_string(j) + "]"));
    }
    out.push_back(std::move(row));
  }
  return out;
}

json element_json(const GroupElement& x) {
  json out = json::array();
  for (std::int64_t c : x.coords) out.push_back(c);
  return out;
}

json witness_json(const std::optional<std::pair<GroupElement, GroupElement>>& w) {
  if (!w) return nullptr;
  return json{element_json(w->first), element_json(w->second)};
}

json verdict_json(const SymmetryVerdict& v) {
  return json{{"symmetric", v.symmetric},
              {"method", v.method == VerdictMethod::TransformEquation ? "transform-equation"
                                                                      : "joint-distribution"},
              {"witness", witness_json(v.witness)}};
}

json subgroup_json(const Subgroup& k) {
  json gens = json::array();
  for (const auto& g : k.generators()) gens.push_back(element_json(g));
  return json{{"size", k.size()}, {"generators", gens}};
}

FiniteAbelianGroup parse_group(const json& spec, const std::string& path) {
  if (const json* orders = optional_field(spec, "orders")) {
    try {
      return FiniteAbelianGroup::make(as_int_vector(*orders, path + ".orders"));
    } catch (const std::invalid_argument& e) {
      fail(path + ".orders", e.what());
    }
  }
  if (const json* tower = optional_field(spec, "tower")) {
    const std::string tpath = path + ".tower";
    const auto primes = as_int_vector(field(*tower, "primes", tpath), tpath + ".primes");
    const std::int64_t level = as_int(field(*tower, "level", tpath), tpath + ".level");
    if (level < 1 || level > 12) fail(tpath + ".level", "level out of range");
    std::vector<std::int64_t> orders;
    for (std::int64_t p : primes) {
      std::int64_t pe = 1;
      for (std::int64_t i = 0; i < level; ++i) {
        if (p <= 1 || pe > (std::int64_t{1} << 40) / p) fail(tpath, "tower too large");
        pe *= p;
      }
      orders.push_back(pe);
    }
    try {
      return FiniteAbelianGroup::make(orders);
    } catch (const std::invalid_argument& e) {
      fail(tpath, e.what());
    }
  }
  fail(path, "expected \"orders\" or \"tower\"");
}

Homomorphism parse_endomorphism(const FiniteAbelianGroup& g, const json& spec,
                                const std::string& path) {
  try {
    if (const json* m = optional_field(spec, "matrix")) {
      return Homomorphism::make(g, g, as_int_matrix(*m, path + ".matrix"));
    }
    if (const json* s = optional_field(spec, "scalar")) {
      return Homomorphism::scalar(g, as_int(*s, path + ".scalar"));
    }
    if (const json* d = optional_field(spec, "diagonal")) {
      return Homomorphism::diagonal(g, as_int_vector(*d, path + ".diagonal"));
    }
  } catch (const FieldError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  fail(path, "expected \"matrix\", \"scalar\" or \"diagonal\"");
}

GroupElement parse_element(const FiniteAbelianGroup& g, const json& spec,
                           const std::string& path) {
  try {
    return g.element(as_int_vector(spec, path));
  } catch (const FieldError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

Subgroup parse_subgroup(const FiniteAbelianGroup& g, const json& spec, const std::string& path) {
  if (!spec.is_array()) fail(path, "expected an array of generator coordinate arrays");
  std::vector<GroupElement> gens;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    gens.push_back(parse_element(g, spec[i], path + "[" + std::to_string(i) + "]"));
  }
  return subgroup_generated(g, gens);
}

Distribution parse_distribution(const FiniteAbelianGroup& g, const json& spec,
                                const std::string& path, std::uint64_t base_seed) {
  try {
    if (optional_field(spec, "haar")) {
      return haar(g);
    }
    if (const json* gens = optional_field(spec, "haar-on-subgroup")) {
      return haar_on_subgroup(parse_subgroup(g, *gens, path + ".haar-on-subgroup"));
    }
    if (const json* coords = optional_field(spec, "dirac")) {
      return dirac(g, parse_element(g, *coords, path + ".dirac"));
    }
    if (const json* r = optional_field(spec, "random")) {
      const std::string rpath = path + ".random";
      const std::uint64_t s = as_uint(field(*r, "seed", rpath), rpath + ".seed");
      const std::uint64_t bound = as_uint(field(*r, "bound", rpath), rpath + ".bound");
      return random_distribution(g, derive_seed(base_seed, s), bound);
    }
    if (const json* mixture = optional_field(spec, "mixture")) {
      const std::string mpath = path + ".mixture";
      if (!mixture->is_array() || mixture->empty()) fail(mpath, "expected a nonempty array");
      std::vector<std::pair<Rational, Distribution>> parts;
      for (std::size_t i = 0; i < mixture->size(); ++i) {
        const std::string ppath = mpath + "[" + std::to_string(i) + "]";
        const json& part = (*mixture)[i];
        parts.emplace_back(
            as_rational(field(part, "weight", ppath), ppath + ".weight"),
            parse_distribution(g, field(part, "component", ppath), ppath + ".component",
                               base_seed));
      }
      return mix(parts);
    }
  } catch (const FieldError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  fail(path, "expected \"haar\", \"haar-on-subgroup\", \"dirac\", \"random\" or \"mixture\"");
}

/// Collects assertion outcomes; any failure turns the run into exit code 1.
struct Assertions {
  std::size_t checked = 0;
  json failures = json::array();

  void check(bool ok, const char* name, json detail = nullptr) {
    ++checked;
    if (!ok) failures.push_back(json{{"assertion", name}, {"detail", std::move(detail)}});
  }
};

/// Compares a reported value against an "expect" entry when present.
void check_expectation(Assertions& asserts, const json* expect, const char* key,
                       const json& actual) {
  if (expect == nullptr) return;
  const json* want = optional_field(*expect, key);
  if (want == nullptr) return;
  asserts.check(*want == actual, "expectation",
                json{{"field", key}, {"expected", *want}, {"actual", actual}});
}

std::uint64_t scenario_seed(const json& doc, const RunOptions& options) {
  if (options.seed_override) return *options.seed_override;
  if (const json* s = optional_field(doc, "seed")) return as_uint(*s, "seed");
  return 0;
}

int scenario_jobs(const json& doc, const RunOptions& options) {
  int jobs = 1;
  if (const json* o = optional_field(doc, "options")) {
    if (const json* j = optional_field(*o, "jobs")) {
      jobs = static_cast<int>(as_int(*j, "options.jobs"));
    }
  }
  if (options.jobs_override) jobs = *options.jobs_override;
  return jobs < 1 ? 1 : jobs;
}

PairSource random_pair_source(const FiniteAbelianGroup& g, std::uint64_t seed,
                              std::uint64_t bound) {
  return [g, seed, bound](std::size_t t) {
    return std::make_pair(
        random_distribution(g, derive_seed(seed, 2 * static_cast<std::uint64_t>(t)), bound),
        random_distribution(g, derive_seed(seed, 2 * static_cast<std::uint64_t>(t) + 1), bound));
  };
}

json run_check_symmetry(const json& doc, std::uint64_t seed, int /*jobs*/, Assertions& asserts) {
  const FiniteAbelianGroup g = parse_group(field(doc, "group", "scenario"), "group");
  const Homomorphism alpha =
      parse_endomorphism(g, field(doc, "automorphism", "scenario"), "automorphism");
  const Distribution mu1 = parse_distribution(g, field(doc, "mu1", "scenario"), "mu1", seed);
  const Distribution mu2 = parse_distribution(g, field(doc, "mu2", "scenario"), "mu2", seed);
  HeydeInstance inst{g, alpha, mu1, mu2};
  try {
    inst.validate();
  } catch (const std::invalid_argument& e) {
    fail("automorphism", e.what());
  }

  const SymmetryVerdict eq = heyde_equation_holds(inst);
  const SymmetryVerdict oracle = conditional_symmetry_oracle(inst);
  asserts.check(eq.symmetric == oracle.symmetric, "methods-agree",
                json{{"equation", eq.symmetric}, {"oracle", oracle.symmetric}});
  if (eq.witness) {
    asserts.check(!equation_witness_recheck(inst, eq.witness->first, eq.witness->second),
                  "equation-witness-rechecks", witness_json(eq.witness));
  }
  if (oracle.witness) {
    asserts.check(!oracle_witness_recheck(inst, oracle.witness->first, oracle.witness->second),
                  "oracle-witness-rechecks", witness_json(oracle.witness));
  }
  return json{{"symmetric", oracle.symmetric},
              {"equation", verdict_json(eq)},
              {"oracle", verdict_json(oracle)},
              {"hypotheses",
               json{{"odd-order", g.odd_order()}, {"admissible", is_admissible(alpha)}}}};
}

json run_verify_theorem(const json& doc, std::uint64_t seed, int jobs, Assertions& asserts) {
  const FiniteAbelianGroup g = parse_group(field(doc, "group", "scenario"), "group");
  const Homomorphism alpha =
      parse_endomorphism(g, field(doc, "automorphism", "scenario"), "automorphism");
  std::uint64_t trials = 25;
  std::uint64_t bound = 6;
  RecognitionOptions ro;
  ro.jobs = jobs;
  if (const json* t = optional_field(doc, "trials")) trials = as_uint(*t, "trials");
  if (const json* o = optional_field(doc, "options")) {
    if (const json* b = optional_field(*o, "bound")) bound = as_uint(*b, "options.bound");
    if (const json* e = optional_field(*o, "exploratory")) {
      ro.exploratory = as_bool(*e, "options.exploratory");
    }
    if (const json* c = optional_field(*o, "converse-sweep")) {
      ro.converse_sweep = as_bool(*c, "options.converse-sweep");
    }
  }
  if (bound < 1) fail("options.bound", "expected a positive bound");

  const RecognitionReport rep =
      verify_haar_recognition(g, alpha, random_pair_source(g, seed, bound), trials, ro);
  json failures = json::array();
  for (const auto& f : rep.failures) {
    failures.push_back(json{{"family", f.family}, {"index", f.index}, {"reason", f.reason}});
  }
  asserts.check(rep.all_assertions_hold(), "recognition-assertions", failures);
  return json{{"hypotheses-hold", rep.hypotheses_hold},
              {"pairs-checked", rep.pairs_checked},
              {"symmetric-pairs", rep.symmetric_pairs},
              {"asymmetric-pairs", rep.asymmetric_pairs},
              {"recognized-decompositions", rep.recognized_decompositions},
              {"converse-pairs-checked", rep.converse_pairs_checked},
              {"failures", failures}};
}

json run_enumerate_solutions(const json& doc, std::uint64_t /*seed*/, int /*jobs*/,
                             Assertions& asserts) {
  const FiniteAbelianGroup g = parse_group(field(doc, "group", "scenario"), "group");
  const Homomorphism alpha =
      parse_endomorphism(g, field(doc, "automorphism", "scenario"), "automorphism");
  IndicatorSolutionOptions opts;
  if (const json* o = optional_field(doc, "options")) {
    if (const json* c = optional_field(*o, "subgroup-cap")) {
      opts.subgroup_cap = as_uint(*c, "options.subgroup-cap");
    }
    if (const json* l = optional_field(*o, "pair-limit")) {
      opts.brute_force_pair_limit = as_uint(*l, "options.pair-limit");
    }
  }
  const IndicatorSolutions sols = enumerate_zero_one_solutions(g, alpha, opts);
  json out_solutions = json::array();
  for (const auto& s : sols.solutions) out_solutions.push_back(subgroup_json(s));
  asserts.check(!sols.solutions.empty(), "solutions-nonempty",
                json{{"count", sols.solutions.size()}});
  return json{{"solution-count", sols.solutions.size()},
              {"solutions", out_solutions},
              {"odd-order", sols.group_odd_order},
              {"admissible", sols.alpha_admissible},
              {"used-fast-criterion", sols.used_fast_criterion}};
}

json run_haar_condition(const json& doc, std::uint64_t seed, int /*jobs*/, Assertions& asserts) {
  std::vector<FiniteAbelianGroup> groups;
  if (const json* gs = optional_field(doc, "groups")) {
    if (!gs->is_array() || gs->empty()) fail("groups", "expected a nonempty array");
    for (std::size_t i = 0; i < gs->size(); ++i) {
      const std::string path = "groups[" + std::to_string(i) + "]";
      try {
        groups.push_back(FiniteAbelianGroup::make(as_int_vector((*gs)[i], path)));
      } catch (const std::invalid_argument& e) {
        fail(path, e.what());
      }
    }
  } else {
    groups.push_back(parse_group(field(doc, "group", "scenario"), "group"));
  }

  const json* auto_spec = optional_field(doc, "automorphisms");
  const bool all_autos =
      auto_spec == nullptr || (auto_spec->is_string() && *auto_spec == "all");
  if (!all_autos && groups.size() != 1) {
    fail("automorphisms", "an explicit automorphism needs a single group");
  }

  std::uint64_t auto_limit = 500;
  std::uint64_t samples = 100;
  std::uint64_t group_cap = 4096;
  if (const json* o = optional_field(doc, "options")) {
    if (const json* l = optional_field(*o, "automorphism-limit")) {
      auto_limit = as_uint(*l, "options.automorphism-limit");
    }
    if (const json* s = optional_field(*o, "samples")) {
      samples = as_uint(*s, "options.samples");
    }
    if (const json* c = optional_field(*o, "group-cap")) {
      group_cap = as_uint(*c, "options.group-cap");
    }
  }

  const json* subgroup_spec = optional_field(doc, "subgroup");
  const json* shift1_spec = optional_field(doc, "shift1");
  const json* shift2_spec = optional_field(doc, "shift2");
  if (subgroup_spec != nullptr && groups.size() != 1) {
    fail("subgroup", "a subgroup condition needs a single group");
  }
  if ((shift1_spec != nullptr) != (shift2_spec != nullptr)) {
    fail("shift1", "shifts must be given in pairs");
  }
  if (shift1_spec != nullptr && subgroup_spec == nullptr) {
    fail("shift1", "shifts need a subgroup");
  }

  std::size_t instances = 0;
  std::size_t skipped = 0;
  std::size_t agreements = 0;
  json mismatches = json::array();
  bool sampled = false;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const FiniteAbelianGroup& g = groups[gi];
    std::vector<Homomorphism> autos;
    if (all_autos) {
      bool enumerated = false;
      try {
        autos = enumerate_automorphisms(g, group_cap);
        enumerated = autos.size() <= auto_limit;
      } catch (const CapExceeded&) {
      }
      if (!enumerated) {
        autos = sample_automorphisms(g, samples, derive_seed(seed, 7700 + gi));
        sampled = true;
      }
    } else {
      Homomorphism a = parse_endomorphism(g, *auto_spec, "automorphisms");
      if (!is_automorphism(a)) fail("automorphisms", "not an automorphism");
      autos.push_back(std::move(a));
    }

    std::optional<Subgroup> k;
    std::optional<GroupElement> x1, x2;
    if (subgroup_spec != nullptr) {
      k = parse_subgroup(g, *subgroup_spec, "subgroup");
      if (shift1_spec != nullptr) {
        x1 = parse_element(g, *shift1_spec, "shift1");
        x2 = parse_element(g, *shift2_spec, "shift2");
      }
    }

    for (std::size_t ai = 0; ai < autos.size(); ++ai) {
      const Homomorphism& a = autos[ai];
      bool condition;
      Distribution mu1 = k ? haar_on_subgroup(*k) : haar(g);
      Distribution mu2 = mu1;
      if (!k) {
        condition = haar_pair_equation_condition(g, a);
      } else if (!x1) {
        // The subgroup containment test needs I + alpha invertible; other
        // automorphisms are outside its hypotheses and are skipped.
        try {
          condition = subgroup_haar_pair_condition(*k, a);
        } catch (const std::domain_error&) {
          ++skipped;
          continue;
        }
      } else {
        try {
          condition = shifted_haar_pair_condition(*k, *x1, *x2, a);
        } catch (const std::domain_error&) {
          ++skipped;
          continue;
        }
        mu1 = shift(mu1, *x1);
        mu2 = shift(mu2, *x2);
      }
      const SymmetryVerdict oracle =
          conditional_symmetry_oracle(HeydeInstance{g, a, mu1, mu2});
      ++instances;
      if (condition == oracle.symmetric) {
        ++agreements;
      } else {
        mismatches.push_back(json{{"group", gi},
                                  {"automorphism", ai},
                                  {"condition", condition},
                                  {"oracle-symmetric", oracle.symmetric},
                                  {"witness", witness_json(oracle.witness)}});
      }
    }
  }
  asserts.check(mismatches.empty(), "condition-matches-oracle", mismatches);
  return json{{"instances", instances},
              {"skipped", skipped},
              {"agreements", agreements},
              {"sampled-automorphisms", sampled},
              {"mismatches", mismatches}};
}

json run_z2_blocks(const json& doc, std::uint64_t seed, int /*jobs*/, Assertions& asserts,
                   const json* expect) {
  const FiniteAbelianGroup g = parse_group(field(doc, "group", "scenario"), "group");
  const Homomorphism alpha =
      parse_endomorphism(g, field(doc, "automorphism", "scenario"), "automorphism");
  if (!is_automorphism(alpha)) fail("automorphism", "not an automorphism");
  std::uint64_t trials = 100;
  std::uint64_t bound = 4;
  if (const json* t = optional_field(doc, "trials")) trials = as_uint(*t, "trials");
  if (const json* o = optional_field(doc, "options")) {
    if (const json* b = optional_field(*o, "bound")) bound = as_uint(*b, "options.bound");
  }
  if (bound < 1) fail("options.bound", "expected a positive bound");

  const auto [plus, minus] = id_plus_minus(alpha);
  const bool plus_auto = is_automorphism(plus);
  const bool minus_auto = is_automorphism(minus);

  const PairSource source = random_pair_source(g, seed, bound);
  std::size_t symmetric = 0;
  std::optional<std::size_t> non_haar_shift_example;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto [mu1, mu2] = source(t);
    const SymmetryVerdict v = conditional_symmetry_oracle(HeydeInstance{g, alpha, mu1, mu2});
    if (!v.symmetric) continue;
    ++symmetric;
    if (!non_haar_shift_example && (!is_haar_shift(mu1) || !is_haar_shift(mu2))) {
      non_haar_shift_example = t;
    }
  }

  asserts.check(symmetric == trials, "all-pairs-symmetric",
                json{{"symmetric", symmetric}, {"trials", trials}});
  check_expectation(asserts, expect, "plus-automorphism", plus_auto);
  check_expectation(asserts, expect, "minus-automorphism", minus_auto);
  check_expectation(asserts, expect, "all-symmetric", symmetric == trials);
  check_expectation(asserts, expect, "non-haar-shift-found", non_haar_shift_example.has_value());
  return json{{"trials", trials},
              {"symmetric", symmetric},
              {"plus-automorphism", plus_auto},
              {"minus-automorphism", minus_auto},
              {"non-haar-shift-found", non_haar_shift_example.has_value()},
              {"non-haar-shift-example",
               non_haar_shift_example ? json(*non_haar_shift_example) : json(nullptr)},
              {"hypotheses", json{{"odd-order", g.odd_order()}}}};
}

json run_torus(const json& doc, Assertions& asserts, const json* expect) {
  QuadraticGaussianSpec a1 = [&] {
    try {
      return QuadraticGaussianSpec::make(as_rational_matrix(field(doc, "a1", "scenario"), "a1"));
    } catch (const std::invalid_argument& e) {
      fail("a1", e.what());
    }
  }();
  QuadraticGaussianSpec a2 = [&] {
    try {
      return QuadraticGaussianSpec::make(as_rational_matrix(field(doc, "a2", "scenario"), "a2"));
    } catch (const std::invalid_argument& e) {
      fail("a2", e.what());
    }
  }();
  LatticeAutomorphism at = [&] {
    try {
      IntMatrix m;
      for (auto& row : as_int_matrix(field(doc, "alpha", "scenario"), "alpha")) {
        m.emplace_back(row.begin(), row.end());
      }
      return LatticeAutomorphism::make(std::move(m));
    } catch (const std::invalid_argument& e) {
      fail("alpha", e.what());
    }
  }();
  int radius = 20;
  if (const json* r = optional_field(doc, "radius")) {
    radius = static_cast<int>(as_int(*r, "radius"));
  }

  bool closed = false;
  WindowVerdict window;
  LatticeAdmissibility adm;
  try {
    closed = gaussian_pair_symmetry_condition(a1, a2, at);
    window = window_verify(a1, a2, at, radius);
    adm = admissibility_on_lattice(at);
  } catch (const std::invalid_argument& e) {
    fail("scenario", e.what());
  }
  asserts.check(closed == window.holds, "closed-form-matches-window",
                json{{"closed-form", closed}, {"window", window.holds}});

  // Perturb one entry of the first form; the verdict must flip in both
  // routes whenever the perturbed form is still a valid spec.
  json perturbed_out(nullptr);
  bool perturbed_flips = false;
  {
    RationalMatrix pm = a1.form();
    pm[0][0] += 1;
    try {
      const QuadraticGaussianSpec p = QuadraticGaussianSpec::make(std::move(pm));
      const bool p_closed = gaussian_pair_symmetry_condition(p, a2, at);
      const WindowVerdict p_window = window_verify(p, a2, at, std::min(radius, 5));
      asserts.check(p_closed == p_window.holds, "perturbed-closed-form-matches-window",
                    json{{"closed-form", p_closed}, {"window", p_window.holds}});
      perturbed_flips = p_closed != closed;
      perturbed_out = json{{"closed-form", p_closed}, {"window", p_window.holds}};
    } catch (const std::invalid_argument&) {
      perturbed_out = json{{"skipped", "perturbation left the valid forms"}};
    }
  }

  const json adm_json = json::array({adm.alpha_unimodular, adm.plus_unimodular,
                                     adm.minus_unimodular});
  check_expectation(asserts, expect, "closed-form", closed);
  check_expectation(asserts, expect, "window", window.holds);
  check_expectation(asserts, expect, "admissibility", adm_json);
  check_expectation(asserts, expect, "perturbed-flips", perturbed_flips);

  json witness(nullptr);
  if (window.witness) {
    witness = json{json(window.witness->first), json(window.witness->second)};
  }
  return json{{"closed-form", closed},
              {"window", json{{"holds", window.holds}, {"radius", radius}, {"witness", witness}}},
              {"admissibility", adm_json},
              {"perturbed", perturbed_out}};
}

json run_solenoid(const json& doc, std::uint64_t seed, Assertions& asserts, const json* expect) {
  const Rational sigma1 = as_rational(field(doc, "sigma1", "scenario"), "sigma1");
  const Rational sigma2 = as_rational(field(doc, "sigma2", "scenario"), "sigma2");
  const Rational alpha = as_rational(field(doc, "alpha", "scenario"), "alpha");
  std::uint64_t trials = 1000;
  if (const json* t = optional_field(doc, "trials")) trials = as_uint(*t, "trials");

  bool condition = false;
  try {
    condition = solenoid_pair_condition(sigma1, sigma2, alpha);
  } catch (const std::invalid_argument& e) {
    fail("scenario", e.what());
  }

  const std::vector<std::pair<Rational, Rational>> samples = {
      {Rational(1), Rational(1)},
      {Rational(0), Rational(1)},
      {Rational(1), Rational(0)},
      {Rational(1, 2), Rational(-3, 2)},
      {Rational(2, 3), Rational(5, 7)}};
  const auto window_at_samples = [&](const Rational& s1, const Rational& s2,
                                     const Rational& a) {
    for (const auto& [u, v] : samples) {
      if (!solenoid_window_identity(s1, s2, a, u, v)) return false;
    }
    return true;
  };
  asserts.check(condition == window_at_samples(sigma1, sigma2, alpha),
                "condition-matches-window-samples", nullptr);

  // Random triples, one in ten constructed to satisfy the condition so both
  // branches of the equivalence are exercised.
  std::mt19937_64 rng(derive_seed(seed, 9000));
  const auto random_rational = [&rng](bool nonnegative) {
    const std::int64_t num = static_cast<std::int64_t>(rng() % 41) - 20;
    const std::int64_t den = static_cast<std::int64_t>(rng() % 20) + 1;
    Rational r(static_cast<long>(num), static_cast<long>(den));
    r.canonicalize();
    if (nonnegative && r < 0) r = -r;
    return r;
  };
  std::size_t equivalence_held = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rational s1 = random_rational(true);
    Rational s2 = random_rational(true);
    Rational a = random_rational(false);
    while (a == 0) a = random_rational(false);
    if (t % 10 == 0) {
      if (a > 0) a = -a;
      if (a == 0) a = Rational(-2);
      s1 = -a * s2;
    }
    const bool c = solenoid_pair_condition(s1, s2, a);
    if (c == window_at_samples(s1, s2, a)) ++equivalence_held;
  }
  asserts.check(equivalence_held == trials, "sweep-equivalence",
                json{{"held", equivalence_held}, {"trials", trials}});

  const bool nontrivial = condition && (sigma1 != 0 || sigma2 != 0);
  check_expectation(asserts, expect, "condition", condition);
  check_expectation(asserts, expect, "nontrivial-solution", nontrivial);
  return json{{"condition", condition},
              {"nontrivial-solution", nontrivial},
              {"sweep", json{{"triples", trials}, {"equivalence-held", equivalence_held}}}};
}

json run_counterexample_suite(const json& doc, std::uint64_t seed, int jobs,
                              Assertions& asserts) {
  const std::string variant = as_string(field(doc, "variant", "scenario"), "variant");
  const json* expect = optional_field(doc, "expect");
  json results;
  if (variant == "z2-blocks") {
    results = run_z2_blocks(doc, seed, jobs, asserts, expect);
  } else if (variant == "torus") {
    results = run_torus(doc, asserts, expect);
  } else if (variant == "solenoid") {
    results = run_solenoid(doc, seed, asserts, expect);
  } else {
    fail("variant", "expected \"z2-blocks\", \"torus\" or \"solenoid\"");
  }
  results["variant"] = variant;
  return results;
}

json run_truncation_sweep(const json& doc, std::uint64_t /*seed*/, int /*jobs*/,
                          Assertions& asserts) {
  const auto primes = as_int_vector(field(doc, "primes", "scenario"), "primes");
  const auto scalars = as_int_vector(field(doc, "scalars", "scenario"), "scalars");
  int max_level = 1;
  if (const json* m = optional_field(doc, "max-level")) {
    max_level = static_cast<int>(as_int(*m, "max-level"));
  }
  TowerCheck check = TowerCheck::Admissibility;
  if (const json* c = optional_field(doc, "check")) {
    const std::string name = as_string(*c, "check");
    if (name == "solutions") {
      check = TowerCheck::IndicatorSolutions;
    } else if (name != "admissibility") {
      fail("check", "expected \"admissibility\" or \"solutions\"");
    }
  }
  IndicatorSolutionOptions opts;
  bool expect_admissible = false;
  if (const json* o = optional_field(doc, "options")) {
    if (const json* cap = optional_field(*o, "subgroup-cap")) {
      opts.subgroup_cap = as_uint(*cap, "options.subgroup-cap");
    }
    if (const json* e = optional_field(*o, "expect-admissible")) {
      expect_admissible = as_bool(*e, "options.expect-admissible");
    }
  }

  TowerReport rep;
  try {
    rep = truncation_tower_sweep(primes, max_level, scalars, check, opts);
  } catch (const std::invalid_argument& e) {
    fail("scenario", e.what());
  }

  json layers = json::array();
  for (const auto& layer : rep.layers) {
    json sizes = json::array();
    for (const auto& sol : layer.solution_ranks) sizes.push_back(sol.size());
    layers.push_back(json{{"level", layer.level},
                          {"orders", layer.orders},
                          {"alpha-automorphism", layer.alpha_automorphism},
                          {"plus-automorphism", layer.plus_automorphism},
                          {"minus-automorphism", layer.minus_automorphism},
                          {"solution-count", layer.solution_ranks.size()},
                          {"solution-sizes", sizes}});
  }
  if (check == TowerCheck::IndicatorSolutions) {
    asserts.check(rep.projections_consistent, "projections-consistent", nullptr);
  }
  if (expect_admissible) {
    asserts.check(rep.admissible_at_all_layers, "admissible-at-all-layers", nullptr);
  }
  return json{{"layers", layers},
              {"admissible-at-all-layers", rep.admissible_at_all_layers},
              {"projections-consistent", rep.projections_consistent}};
}

json run_gaussian_check(const json& doc, Assertions& asserts) {
  // Same engine as the torus variant, without the pinned perturbation; for
  // ad hoc matrices.
  QuadraticGaussianSpec a1 = [&] {
    try {
      return QuadraticGaussianSpec::make(as_rational_matrix(field(doc, "a1", "scenario"), "a1"));
    } catch (const std::invalid_argument& e) {
      fail("a1", e.what());
    }
  }();
  QuadraticGaussianSpec a2 = [&] {
    try {
      return QuadraticGaussianSpec::make(as_rational_matrix(field(doc, "a2", "scenario"), "a2"));
    } catch (const std::invalid_argument& e) {
      fail("a2", e.what());
    }
  }();
  LatticeAutomorphism at = [&] {
    try {
      IntMatrix m;
      for (auto& row : as_int_matrix(field(doc, "alpha", "scenario"), "alpha")) {
        m.emplace_back(row.begin(), row.end());
      }
      return LatticeAutomorphism::make(std::move(m));
    } catch (const std::invalid_argument& e) {
      fail("alpha", e.what());
    }
  }();
  int radius = 5;
  if (const json* r = optional_field(doc, "radius")) {
    radius = static_cast<int>(as_int(*r, "radius"));
  }

  bool closed = false;
  WindowVerdict window;
  LatticeAdmissibility adm;
  try {
    closed = gaussian_pair_symmetry_condition(a1, a2, at);
    window = window_verify(a1, a2, at, radius);
    adm = admissibility_on_lattice(at);
  } catch (const std::invalid_argument& e) {
    fail("scenario", e.what());
  }
  asserts.check(closed == window.holds, "closed-form-matches-window",
                json{{"closed-form", closed}, {"window", window.holds}});
  json witness(nullptr);
  if (window.witness) {
    // The witness must reproduce the violation from raw form evaluations.
    const auto& [u, v] = *window.witness;
    const auto av = at.apply(v);
    std::vector<std::int64_t> upv(u.size()), umv(u.size()), upav(u.size()), umav(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      upv[i] = u[i] + v[i];
      umv[i] = u[i] - v[i];
      upav[i] = u[i] + av[i];
      umav[i] = u[i] - av[i];
    }
    const bool violates = a1.value_at(upv) + a2.value_at(upav) !=
                          a1.value_at(umv) + a2.value_at(umav);
    asserts.check(violates, "window-witness-rechecks", json{json(u), json(v)});
    witness = json{json(u), json(v)};
  }
  return json{{"closed-form", closed},
              {"window", json{{"holds", window.holds}, {"radius", radius}, {"witness", witness}}},
              {"admissibility", json::array({adm.alpha_unimodular, adm.plus_unimodular,
                                             adm.minus_unimodular})}};
}

}  // namespace

RunResult run_scenario(const std::string& scenario_text, const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  json report;
  report["engine"] = json{{"name", "haarshift"}, {"version", version_string}};

  json doc;
  try {
    doc = json::parse(scenario_text);
  } catch (const json::parse_error& e) {
    report["error"] = json{{"path", "scenario"}, {"message", e.what()}};
    report["status"] = "invalid";
    return RunResult{2, report.dump(2) + "\n"};
  }

  int exit_code = 0;
  try {
    if (!doc.is_object()) fail("scenario", "expected an object");
    const std::string kind = as_string(field(doc, "kind", "scenario"), "kind");
    const std::uint64_t seed = scenario_seed(doc, options);
    const int jobs = scenario_jobs(doc, options);
    report["scenario"] = doc;
    report["seed"] = seed;

    Assertions asserts;
    json results;
    if (kind == "check-symmetry") {
      results = run_check_symmetry(doc, seed, jobs, asserts);
    } else if (kind == "verify-theorem") {
      results = run_verify_theorem(doc, seed, jobs, asserts);
    } else if (kind == "enumerate-solutions") {
      results = run_enumerate_solutions(doc, seed, jobs, asserts);
    } else if (kind == "haar-condition") {
      results = run_haar_condition(doc, seed, jobs, asserts);
    } else if (kind == "counterexample-suite") {
      results = run_counterexample_suite(doc, seed, jobs, asserts);
    } else if (kind == "truncation-sweep") {
      results = run_truncation_sweep(doc, seed, jobs, asserts);
    } else if (kind == "gaussian-check") {
      results = run_gaussian_check(doc, asserts);
    } else {
      fail("kind", "unknown scenario kind");
    }

    report["results"] = results;
    report["assertions"] = json{{"checked", asserts.checked},
                                {"failed", asserts.failures.size()},
                                {"failures", asserts.failures}};
    exit_code = asserts.failures.empty() ? 0 : 1;
    report["status"] = exit_code == 0 ? "pass" : "fail";
  } catch (const FieldError& e) {
    report["error"] = json{{"path", e.path}, {"message", e.what()}};
    report["status"] = "invalid";
    exit_code = 2;
  } catch (const std::domain_error& e) {
    report["error"] = json{{"path", "scenario"}, {"message", e.what()}};
    report["status"] = "invalid";
    exit_code = 2;
  } catch (const CapExceeded& e) {
    report["error"] = json{{"path", "scenario"}, {"message", e.what()}};
    report["status"] = "invalid";
    exit_code = 2;
  } catch (const std::invalid_argument& e) {
    report["error"] = json{{"path", "scenario"}, {"message", e.what()}};
    report["status"] = "invalid";
    exit_code = 2;
  } catch (const std::logic_error& e) {
    // An internal certification tripped: a checked property failed.
    report["error"] = json{{"path", "engine"}, {"message", e.what()}};
    report["status"] = "fail";
    exit_code = 1;
  }

  if (options.include_timing) {
    const auto elapsed = std::chrono::steady_clock::now() - started;
    report["timing-ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  }
  return RunResult{exit_code, report.dump(2) + "\n"};
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : presets::kPresets) names.emplace_back(p.name);
  return names;
}

std::string preset_scenario(const std::string& name) {
  for (const auto& p : presets::kPresets) {
    if (name == p.name) return p.text;
  }
  throw std::out_of_range("unknown preset: " + name);
}

}  // namespace haarshift
