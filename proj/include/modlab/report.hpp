#pragma once

#include <map>
#include <string>

namespace modlab {

struct CheckReport {
  std::string check;
  int samples = 0;
  double max_residual = 0;
  bool pass = false;
  int discarded = 0;
  std::map<std::string, double> parts;  // named residuals

  void add(const std::string& key, double r);
};

// {"check", "samples", "max_residual", "pass", "discarded"} plus "parts"
std::string report_json(const CheckReport& r);

}  // namespace modlab
