#pragma once

// Verification report: one record per check, classification flags, and the
// sampling parameters that make the run reproducible.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace qstat {

struct CheckRecord {
  std::string id;
  std::string anchor;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::string spec_label;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::vector<CheckRecord> checks;
  std::map<std::string, bool> flags;

  // NaN residuals fail.
  void add(std::string id, std::string anchor, double residual, double tol) {
    checks.push_back({std::move(id), std::move(anchor), residual, tol, residual <= tol});
  }

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
  }

  const CheckRecord* find(const std::string& id) const {
    for (const auto& c : checks)
      if (c.id == id) return &c;
    return nullptr;
  }

  void sort_checks() {
    std::stable_sort(checks.begin(), checks.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["spec_label"] = spec_label;
    j["seed"] = seed;
    j["samples"] = samples;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
      nlohmann::ordered_json e;
      e["id"] = c.id;
      e["anchor"] = c.anchor;
      // json has no NaN/inf; those become null
      if (std::isfinite(c.max_residual))
        e["max_residual"] = c.max_residual;
      else
        e["max_residual"] = nullptr;
      e["tolerance"] = c.tolerance;
      e["pass"] = c.pass;
      arr.push_back(std::move(e));
    }
    j["checks"] = std::move(arr);
    j["flags"] = flags;
    return j;
  }
};

}  // namespace qstat
