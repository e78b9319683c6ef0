#pragma once

#include <string>

#include "json.hpp"

#include "rsl/harness.hpp"
#include "rsl/problem.hpp"

namespace testing {

inline std::string config_path(const std::string& name) {
  return std::string(RSL_CONFIG_DIR) + "/" + name + ".json";
}

inline rsl::ProblemSpec load(const std::string& name) {
  return rsl::load_config(config_path(name)).spec;
}

inline rsl::ProblemSpec make(const nlohmann::json& overrides) {
  nlohmann::json doc = {{"p1", 1}, {"p2", 1}, {"gamma1", 1}, {"gamma2", 1}, {"delta1", 1},
                        {"delta2", 1}, {"a1", 0}, {"a2", 1}, {"d", 1}, {"q_left", "0"},
                        {"q_right", "0"}, {"delta_left", "0"}, {"delta_right", "0"}};
  doc.update(overrides);
  return rsl::load_problem(doc);
}

}  // namespace testing
