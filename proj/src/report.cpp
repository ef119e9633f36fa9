#include "modlab/report.hpp"

#include <algorithm>

#include <json.hpp>

namespace modlab {

void CheckReport::add(const std::string& key, double r) {
  auto it = parts.find(key);
  parts[key] = it == parts.end() ? r : std::max(it->second, r);
  max_residual = std::max(max_residual, r);
}

std::string report_json(const CheckReport& r) {
  nlohmann::json j;
  j["check"] = r.check;
  j["samples"] = r.samples;
  j["max_residual"] = r.max_residual;
  j["pass"] = r.pass;
  j["discarded"] = r.discarded;
  j["parts"] = r.parts;
  return j.dump();
}

}  // namespace modlab
