#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "haarshift/heyde.hpp"
#include "haarshift/scenario.hpp"

#include <json.hpp>

using namespace haarshift;
using json = nlohmann::ordered_json;

TEST_CASE("the preset catalog is complete and rejects unknown names") {
  const std::vector<std::string> expected = {
      "remark-3.5-z2-blocks", "remark-3.5-torus",  "remark-3.5-solenoid",
      "prop-2.7-exhaustive",  "theorem-2.1-z25",   "tower-5-7"};
  CHECK(preset_names() == expected);
  for (const auto& name : expected) {
    const json doc = json::parse(preset_scenario(name));
    CHECK(doc.is_object());
  }
  CHECK_THROWS_AS(preset_scenario("no-such-preset"), std::out_of_range);
}

TEST_CASE("every preset runs to a passing report") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const RunResult r = run_scenario(preset_scenario(name));
    CHECK(r.exit_code == 0);
    const json rep = json::parse(r.report);
    CHECK(rep.at("status") == "pass");
    CHECK(rep.at("assertions").at("failed") == 0);
    CHECK(rep.at("assertions").at("checked").get<int>() > 0);
    CHECK(rep.at("engine").at("name") == "haarshift");
  }
}

TEST_CASE("reports are byte-deterministic and jobs-neutral") {
  const std::string text = preset_scenario("theorem-2.1-z25");
  const RunResult a = run_scenario(text);
  const RunResult b = run_scenario(text);
  CHECK(a.report == b.report);
  RunOptions jobs;
  jobs.jobs_override = 7;
  CHECK(run_scenario(text, jobs).report == a.report);

  RunOptions seeded;
  seeded.seed_override = 99;
  const json rep = json::parse(run_scenario(text, seeded).report);
  CHECK(rep.at("seed") == 99);

  RunOptions timed;
  timed.include_timing = true;
  const json treport = json::parse(run_scenario(text, timed).report);
  CHECK(treport.contains("timing-ms"));
  CHECK_FALSE(json::parse(a.report).contains("timing-ms"));
}

TEST_CASE("the scenario document is echoed verbatim") {
  const std::string text = R"({
  "kind": "check-symmetry",
  "group": {"orders": [5]},
  "automorphism": {"scalar": 2},
  "mu1": {"haar": true},
  "mu2": {"dirac": [3]},
  "seed": 4
})";
  const RunResult r = run_scenario(text);
  CHECK(r.exit_code == 0);
  const json rep = json::parse(r.report);
  CHECK(rep.at("scenario") == json::parse(text));
  CHECK(rep.at("scenario").dump() == json::parse(text).dump());
  CHECK(rep.at("seed") == 4);
}

TEST_CASE("invalid documents exit with a field diagnostic") {
  const auto run_expect_invalid = [](const std::string& text, const std::string& path) {
    const RunResult r = run_scenario(text);
    CHECK(r.exit_code == 2);
    const json rep = json::parse(r.report);
    CHECK(rep.at("status") == "invalid");
    CHECK(rep.at("error").at("path") == path);
    return rep;
  };

  run_expect_invalid("this is not a document", "scenario");
  run_expect_invalid("[1, 2]", "scenario");
  run_expect_invalid(R"({"group": {"orders": [3]}})", "scenario.kind");
  run_expect_invalid(R"({"kind": "no-such-kind"})", "kind");
  run_expect_invalid(
      R"({"kind": "check-symmetry", "group": {"orders": [0]},
          "automorphism": {"scalar": 1}, "mu1": {"haar": true}, "mu2": {"haar": true}})",
      "group.orders");
  run_expect_invalid(
      R"({"kind": "check-symmetry", "group": {"orders": [4]},
          "automorphism": {"scalar": 2}, "mu1": {"haar": true}, "mu2": {"haar": true}})",
      "automorphism");
  run_expect_invalid(
      R"({"kind": "check-symmetry", "group": {"orders": [4]},
          "automorphism": {"scalar": 1}, "mu1": {"mixture": [
            {"weight": "2/1", "component": {"haar": true}},
            {"weight": "-1/1", "component": {"haar": true}}]},
          "mu2": {"haar": true}})",
      "mu1");
  run_expect_invalid(
      R"({"kind": "check-symmetry", "group": {"orders": [4]},
          "automorphism": {"scalar": 1}, "mu1": {"dirac": [1, 2]},
          "mu2": {"haar": true}})",
      "mu1.dirac");
  run_expect_invalid(
      R"({"kind": "counterexample-suite", "variant": "nope"})", "variant");
  run_expect_invalid(
      R"({"kind": "truncation-sweep", "primes": [2], "scalars": [1]})", "scenario");
}

TEST_CASE("a failed condition with methods in agreement still passes") {
  // Identity coupling on an even-order group: the full Haar pair is
  // asymmetric and both deciders say so.
  const std::string text = R"({
    "kind": "check-symmetry",
    "group": {"orders": [4]},
    "automorphism": {"scalar": 1},
    "mu1": {"haar": true},
    "mu2": {"haar": true}
  })";
  const RunResult r = run_scenario(text);
  CHECK(r.exit_code == 0);
  const json rep = json::parse(r.report);
  CHECK(rep.at("results").at("symmetric") == false);
  CHECK(rep.at("results").at("equation").at("symmetric") == false);
  CHECK(rep.at("results").at("oracle").at("symmetric") == false);
  CHECK(rep.at("status") == "pass");
}

TEST_CASE("reported witnesses recheck against a fresh instance") {
  const std::string text = R"({
    "kind": "check-symmetry",
    "group": {"orders": [5]},
    "automorphism": {"scalar": 2},
    "mu1": {"dirac": [1]},
    "mu2": {"dirac": [1]}
  })";
  const RunResult r = run_scenario(text);
  CHECK(r.exit_code == 0);
  const json rep = json::parse(r.report);
  CHECK(rep.at("results").at("symmetric") == false);

  const auto g = FiniteAbelianGroup::make({5});
  const HeydeInstance inst{g, Homomorphism::scalar(g, 2), dirac(g, g.element({1})),
                           dirac(g, g.element({1}))};
  const json ow = rep.at("results").at("oracle").at("witness");
  REQUIRE_FALSE(ow.is_null());
  const GroupElement u = g.element(ow.at(0).get<std::vector<std::int64_t>>());
  const GroupElement w = g.element(ow.at(1).get<std::vector<std::int64_t>>());
  CHECK_FALSE(oracle_witness_recheck(inst, u, w));

  const json ew = rep.at("results").at("equation").at("witness");
  REQUIRE_FALSE(ew.is_null());
  const GroupElement eu = g.element(ew.at(0).get<std::vector<std::int64_t>>());
  const GroupElement ev = g.element(ew.at(1).get<std::vector<std::int64_t>>());
  CHECK_FALSE(equation_witness_recheck(inst, eu, ev));
}

TEST_CASE("expectation mismatches fail the run with exit code 1") {
  std::string text = preset_scenario("remark-3.5-solenoid");
  json doc = json::parse(text);
  doc["expect"]["condition"] = false;
  const RunResult r = run_scenario(doc.dump());
  CHECK(r.exit_code == 1);
  const json rep = json::parse(r.report);
  CHECK(rep.at("status") == "fail");
  CHECK(rep.at("assertions").at("failed").get<int>() >= 1);
  const json& failure = rep.at("assertions").at("failures").at(0);
  CHECK(failure.at("assertion") == "expectation");
}

TEST_CASE("enumerate-solutions and haar-condition kinds run standalone") {
  const RunResult r1 = run_scenario(R"({
    "kind": "enumerate-solutions",
    "group": {"orders": [3, 3]},
    "automorphism": {"matrix": [[0, 1], [1, 1]]}
  })");
  CHECK(r1.exit_code == 0);
  const json rep1 = json::parse(r1.report);
  CHECK(rep1.at("results").at("solution-count") == 2);
  CHECK(rep1.at("results").at("used-fast-criterion") == false);

  const RunResult r2 = run_scenario(R"({
    "kind": "haar-condition",
    "group": {"orders": [9]},
    "automorphisms": {"scalar": 4},
    "subgroup": [[3]]
  })");
  CHECK(r2.exit_code == 0);
  const json rep2 = json::parse(r2.report);
  CHECK(rep2.at("results").at("instances") == 1);
  CHECK(rep2.at("results").at("mismatches").empty());

  const RunResult r3 = run_scenario(R"({
    "kind": "gaussian-check",
    "a1": [["1", "-1"], ["-1", "2"]],
    "a2": [[1, 0], [0, 1]],
    "alpha": [[-1, 1], [1, -2]],
    "radius": 4
  })");
  CHECK(r3.exit_code == 0);
  const json rep3 = json::parse(r3.report);
  CHECK(rep3.at("results").at("closed-form") == true);
  CHECK(rep3.at("results").at("window").at("holds") == true);
}

TEST_CASE("tower scenarios accept the tower group shorthand") {
  const RunResult r = run_scenario(R"({
    "kind": "enumerate-solutions",
    "group": {"tower": {"primes": [5], "level": 2}},
    "automorphism": {"scalar": 2}
  })");
  CHECK(r.exit_code == 0);
  const json rep = json::parse(r.report);
  CHECK(rep.at("results").at("solution-count") == 3);
}
