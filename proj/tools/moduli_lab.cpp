#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "modlab/scenarios.hpp"

namespace {

constexpr int kConfigError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw modlab::ConfigError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moduli-lab: verification scenarios for decorated moduli spaces"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "list registered scenarios");
  auto* run = app.add_subcommand("run", "run a scenario");
  std::string scenario, out_path, group, config_path;
  std::uint64_t seed = 1;
  int samples = -1;
  run->add_option("scenario", scenario, "scenario name")->required();
  auto* seed_opt = run->add_option("--seed", seed, "random seed");
  auto* samples_opt = run->add_option("--samples", samples, "samples per sampled check");
  run->add_option("--out", out_path, "write the JSON report here");
  run->add_option("--group", group, "sl2r | sl2c | sl3");
  run->add_option("--config", config_path, "JSON overrides {seed, samples, group}");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (*list) {
    for (const auto& name : modlab::list_scenarios()) std::cout << name << "\n";
    return 0;
  }

  modlab::ScenarioReport report;
  try {
    modlab::ScenarioConfig c{scenario, "", 1, -1};
    if (!config_path.empty()) c = modlab::apply_config_json(c, read_file(config_path));
    if (*seed_opt) c.seed = seed;
    if (*samples_opt) c.samples = samples;
    if (!group.empty()) c.group = group;
    if (*samples_opt && samples < 0)
      throw modlab::ConfigError("samples must be nonnegative");
    report = modlab::run_scenario(c);
  } catch (const modlab::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  }

  std::cout << modlab::scenario_summary(report);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return kConfigError;
    }
    out << modlab::scenario_json(report) << "\n";
  }
  return report.pass() ? 0 : 1;
}
