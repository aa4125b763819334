#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace lsg {

struct CheckRecord {
  std::string module;
  std::string op;
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline CheckRecord make_check(std::string module, std::string op, std::string name,
                              double residual, double tolerance) {
  CheckRecord r;
  r.module = std::move(module);
  r.op = std::move(op);
  r.name = std::move(name);
  r.residual = residual;
  r.tolerance = tolerance;
  r.pass = residual <= tolerance;
  return r;
}

struct IdentityReport {
  std::vector<CheckRecord> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  double max_residual() const {
    double m = 0;
    for (const auto& c : checks) m = std::max(m, c.residual);
    return m;
  }
  void add(CheckRecord c) { checks.push_back(std::move(c)); }
  void merge(const IdentityReport& o) {
    checks.insert(checks.end(), o.checks.begin(), o.checks.end());
  }
};

struct SuiteReport {
  std::string artifact_version = "0.1.0";
  std::string command;
  std::string geometry_name;  // empty when not geometry-specific
  nlohmann::json geometry_params = nlohmann::json::object();
  uint64_t seed = 0;
  std::vector<CheckRecord> checks;
  double wall_time_s = 0.0;

  bool overall_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  void add(CheckRecord c) { checks.push_back(std::move(c)); }
  void merge(const IdentityReport& r) {
    checks.insert(checks.end(), r.checks.begin(), r.checks.end());
  }
};

inline nlohmann::json to_json(const CheckRecord& c) {
  return {{"module", c.module}, {"op", c.op},       {"name", c.name},
          {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}};
}

inline nlohmann::json to_json(const IdentityReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"checks", checks}, {"pass", r.all_pass()}};
}

inline nlohmann::json to_json(const SuiteReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"artifact_version", r.artifact_version},
          {"command", r.command},
          {"geometry", r.geometry_name.empty()
                           ? nlohmann::json()
                           : nlohmann::json{{"name", r.geometry_name}, {"params", r.geometry_params}}},
          {"seed", r.seed},
          {"checks", checks},
          {"overall_pass", r.overall_pass()},
          {"wall_time_s", r.wall_time_s}};
}

}  // namespace lsg
