#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "crossroads/sim.hpp"

namespace crossroads {

/// Validation failure; `offenses` lists every problem found, not only the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> offenses);
  const std::vector<std::string>& offenses() const noexcept { return offenses_; }

 private:
  std::vector<std::string> offenses_;
};

/// Names accepted by builtin_scenario.
const std::vector<std::string>& builtin_scenario_names();

/// The crossing experiments:
///  test1-macro, test1-multiscale          N = 100, theta = 0 / 0.7
///  test2-mixed, test2-micro, test2-macro  N = 200, theta = 1 on [80,120]^2 / 1 / 0
/// Throws ConfigError for an unknown name.
ScenarioConfig builtin_scenario(std::string_view name);

/// Checks ranges and consistency; throws ConfigError listing each offense.
void validate(const ScenarioConfig& config);

nlohmann::json to_json(const ScenarioConfig& config);

/// Strict parse: unknown keys, wrong types, missing required fields and
/// out-of-range values are all reported together in one ConfigError.
/// `totals` is derived from t_max and injection_period when absent.
ScenarioConfig config_from_json(const nlohmann::json& j);

/// A built-in scenario name or a path to a JSON config file.
ScenarioConfig parse_config(const std::string& name_or_path);

}  // namespace crossroads
