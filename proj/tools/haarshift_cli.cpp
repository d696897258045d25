#include "haarshift/scenario.hpp"
#include "haarshift/version.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int run_command(const std::string& scenario_path, const std::string& out_path,
                const haarshift::RunOptions& options) {
  std::string text;
  if (scenario_path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    text = buf.str();
  } else {
    std::ifstream in(scenario_path, std::ios::binary);
    if (!in) {
      std::cerr << "haarshift: cannot open scenario file: " << scenario_path << "\n";
      return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }

  const haarshift::RunResult result = haarshift::run_scenario(text, options);
  if (out_path.empty()) {
    std::cout << result.report;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "haarshift: cannot write report file: " << out_path << "\n";
      return 2;
    }
    out << result.report;
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checker for conditional symmetry of linear forms on finite abelian groups"};
  app.set_version_flag("--version", haarshift::version_string);
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path;
  haarshift::RunOptions options;
  std::uint64_t seed = 0;
  int jobs = 0;

  CLI::App* run = app.add_subcommand("run", "Execute a scenario file and emit a report");
  run->add_option("scenario", scenario_path, "Scenario document ('-' for stdin)")->required();
  run->add_option("--out", out_path, "Write the report here instead of stdout");
  CLI::Option* seed_opt = run->add_option("--seed", seed, "Override the scenario's base seed");
  CLI::Option* jobs_opt = run->add_option("--jobs", jobs, "Worker threads (content-neutral)");
  run->add_flag("--timing", options.include_timing,
                "Include wall time in the report (breaks byte determinism)");

  std::string preset_name;
  CLI::App* preset = app.add_subcommand("preset", "Print a built-in scenario document");
  preset->add_option("name", preset_name, "Preset name (see list-presets)")->required();

  CLI::App* list = app.add_subcommand("list-presets", "List built-in scenario names");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& name : haarshift::preset_names()) std::cout << name << "\n";
    return 0;
  }
  if (preset->parsed()) {
    try {
      std::cout << haarshift::preset_scenario(preset_name);
    } catch (const std::out_of_range&) {
      std::cerr << "haarshift: unknown preset: " << preset_name << "\n";
      std::cerr << "known presets:\n";
      for (const auto& name : haarshift::preset_names()) std::cerr << "  " << name << "\n";
      return 2;
    }
    return 0;
  }
  if (seed_opt->count() > 0) options.seed_override = seed;
  if (jobs_opt->count() > 0) options.jobs_override = jobs;
  return run_command(scenario_path, out_path, options);
}
