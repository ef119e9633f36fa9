#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "modlab/scenarios.hpp"

using namespace modlab;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run_cli(const std::string& args) {
  const std::string cmd = std::string(MODLAB_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), buf.size(), p)) r.out += buf.data();
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

std::string temp_path(const std::string& name) { return ::testing::TempDir() + "modlab_" + name; }

const std::vector<std::string> kNames = {"bigon-poisson-group", "bruhat-square", "coisotropic-chain",
                                         "dirac-pipeline",      "lu-weinstein",  "pair-2group",
                                         "quadlie-core",        "square-dual-group", "triple-cube"};

}  // namespace

TEST(Cli, ListsAllScenariosStably) {
  auto a = run_cli("list"), b = run_cli("list");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  std::istringstream in(a.out);
  std::vector<std::string> names;
  for (std::string line; std::getline(in, line);) names.push_back(line);
  EXPECT_EQ(names, kNames);
  EXPECT_EQ(list_scenarios(), kNames);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("run quadlie-core").code, 0);
  EXPECT_EQ(run_cli("run no-such-scenario").code, 2);
  EXPECT_EQ(run_cli("run quadlie-core --group sl7").code, 2);
  EXPECT_EQ(run_cli("run bruhat-square --group sl2r").code, 2);
  EXPECT_EQ(run_cli("run quadlie-core --samples -1").code, 2);
  EXPECT_EQ(run_cli("").code, 2);
  EXPECT_EQ(run_cli("run quadlie-core --samples 0").code, 1);
  // a tolerance below the observed residual turns a passing check into a failure
  const std::string cfg = temp_path("tight.json");
  std::ofstream(cfg) << R"({"tolerances": {"cybe-sl3": 0.0}})";
  auto tight = run_cli("run quadlie-core --config " + cfg);
  EXPECT_EQ(tight.code, 1) << tight.out;
  std::ofstream(cfg) << R"({"tolerances": {"not-a-check": 1.0}})";
  EXPECT_EQ(run_cli("run quadlie-core --config " + cfg).code, 2);
}

TEST(Cli, JsonReportSchema) {
  const std::string path = temp_path("report.json");
  auto r = run_cli("run pair-2group --seed 7 --samples 5 --out " + path);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  auto j = read_json(path);
  EXPECT_EQ(j["scenario"]["name"], "pair-2group");
  EXPECT_EQ(j["scenario"]["seed"], 7);
  EXPECT_EQ(j["scenario"]["samples"], 5);
  EXPECT_EQ(j["scenario"]["group"], "sl2r");
  EXPECT_EQ(j["version"], version_string());
  EXPECT_TRUE(j["wall_time_s"].is_number());
  EXPECT_TRUE(j["pass"].get<bool>());
  std::vector<std::string> names;
  for (const auto& c : j["checks"]) {
    for (const char* key : {"name", "samples", "max_residual", "pass", "discarded"}) EXPECT_TRUE(c.contains(key));
    const bool control = c["control"].get<bool>();
    const double res = c["max_residual"], tol = c["tolerance"];
    EXPECT_EQ(c["pass"].get<bool>(), control ? res > tol : res <= tol);
    names.push_back(c["name"]);
  }
  EXPECT_TRUE(std::is_sorted(names.begin(), names.end()));
}

TEST(Cli, NoDataReport) {
  const std::string path = temp_path("empty.json");
  auto r = run_cli("run lu-weinstein --samples 0 --out " + path);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("no data"), std::string::npos);
  auto j = read_json(path);
  EXPECT_TRUE(j["no_data"].get<bool>());
  EXPECT_FALSE(j["pass"].get<bool>());
  EXPECT_TRUE(j["checks"].empty());
}

TEST(Scenarios, ReportsReproducibleForSeed) {
  for (const char* name : {"bigon-poisson-group", "lu-weinstein", "bruhat-square"}) {
    ScenarioConfig c{name, "", 11, 4};
    const std::string a = scenario_json(run_scenario(c), false), b = scenario_json(run_scenario(c), false);
    EXPECT_EQ(a, b) << name;
    c.seed = 12;
    EXPECT_NE(scenario_json(run_scenario(c), false), a) << name;
  }
}

TEST(Scenarios, EverySuiteHasARejectedControl) {
  for (const auto& name : list_scenarios()) {
    auto rep = run_scenario(ScenarioConfig{name, "", 3, 3});
    EXPECT_TRUE(rep.pass()) << scenario_summary(rep);
    int controls = 0;
    for (const auto& c : rep.checks)
      if (c.control) {
        ++controls;
        EXPECT_TRUE(c.report.pass) << name << " " << c.report.check;
        EXPECT_GT(c.report.max_residual, c.tolerance);
      }
    EXPECT_GE(controls, 1) << name;
  }
}

TEST(Scenarios, ConfigJson) {
  ScenarioConfig c{"quadlie-core", "", 1, -1};
  c = apply_config_json(c, R"({"seed": 9, "samples": 3, "group": "sl2c", "tolerances": {"cybe-sl2": 1e-10}})");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.samples, 3);
  EXPECT_EQ(c.group, "sl2c");
  EXPECT_EQ(c.tolerances.at("cybe-sl2"), 1e-10);
  EXPECT_THROW(apply_config_json(c, "[1]"), ConfigError);
  EXPECT_THROW(apply_config_json(c, R"({"samples": -1})"), ConfigError);
  EXPECT_THROW(apply_config_json(c, R"({"colour": 1})"), ConfigError);
  EXPECT_THROW(apply_config_json(c, "{"), ConfigError);
  EXPECT_EQ(resolve_config(ScenarioConfig{"bruhat-square", "", 1, -1}).group, "sl2c");
  EXPECT_THROW(resolve_config(ScenarioConfig{"nope", "", 1, -1}), ConfigError);
}
