// scenarios.hpp - named, reproducible experiment runners behind the CLI.
// Each scenario composes the library modules, writes CSV/JSON artifacts plus
// a manifest, and returns a machine-readable summary.

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lightent/params.hpp"

namespace lightent {

// Configuration/usage problems; the CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    std::string scenario;
    PhysicalParams params;
    nlohmann::json numerics = nlohmann::json::object();  // per-scenario knobs
    std::vector<nlohmann::json> sweep;  // one {dotted.key: value} object per run point
    std::filesystem::path output_dir = "out";
    int jobs = 1;
    bool quiet = false;
};

const std::vector<std::string>& scenario_names();

// Parses a config document ({"params": {...}, "numerics": {...}, "sweep":
// [...], "output_dir": ...}) and applies dotted-path overrides of the form
// "params.omega0=2" or "numerics.window_widths=100".
ScenarioConfig make_scenario_config(const std::string& scenario, const nlohmann::json& doc,
                                    const std::vector<std::string>& overrides);

// Applies one dotted-path override; value_text is parsed as JSON when
// possible and kept as a string otherwise.
void apply_override(ScenarioConfig& cfg, const std::string& key, const std::string& value_text);

// Runs the scenario (all sweep points when a sweep is configured); returns 0
// on success. ConfigError means a bad config; other exceptions are
// numerical/runtime failures.
int run_scenario(const ScenarioConfig& cfg);

}  // namespace lightent
