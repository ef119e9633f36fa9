#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "modlab/report.hpp"

namespace modlab {

struct ScenarioConfig {
  std::string name;
  std::string group;  // empty: scenario default
  std::uint64_t seed = 1;
  int samples = -1;  // negative: scenario default
  std::map<std::string, double> tolerances;  // per-check overrides
};

// a control check passes when its deliberately broken fixture exceeds the tolerance
struct ScenarioCheck {
  CheckReport report;
  double tolerance = 0;
  bool control = false;
};

struct ScenarioReport {
  ScenarioConfig config;  // resolved group and sample count
  std::vector<ScenarioCheck> checks;  // sorted by name
  double wall_seconds = 0;
  std::string version;
  bool no_data = false;
  bool pass() const;
  int discarded() const;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::vector<std::string> list_scenarios();
std::string version_string();
// throws ConfigError for unknown scenarios or groups and for tolerance overrides of unknown checks
ScenarioConfig resolve_config(const ScenarioConfig& c);
ScenarioReport run_scenario(const ScenarioConfig& c);
// overrides from a JSON document {"seed", "samples", "group", "tolerances": {check: tol}}; throws ConfigError
ScenarioConfig apply_config_json(ScenarioConfig c, const std::string& text);

std::string scenario_json(const ScenarioReport& r, bool include_wall_time = true);
std::string scenario_summary(const ScenarioReport& r);

}  // namespace modlab
