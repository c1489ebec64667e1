#pragma once

// Scenario configuration, execution and reporting behind the rotlab CLI.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "rotlab/types.hpp"

namespace rotlab {

inline constexpr const char* kVersion = "rotlab 0.1.0";

/// Invalid configuration; `path` names the offending field ("parameters.step").
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& message)
        : Error(path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct ScenarioConfig {
    std::string scenario;
    nlohmann::json parameters = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::string output_dir;
};

/// Parses {"scenario", "parameters", "seed", "output_dir"}; unknown keys and
/// invalid parameters raise ConfigError for the first problem found.
ScenarioConfig parse_config(const nlohmann::json& j);
/// Every problem found in the configuration, as "path: message" lines.
std::vector<std::string> validate_config(const nlohmann::json& j);

const std::vector<std::string>& scenario_ids();
std::string scenario_summary(const std::string& id);

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation;  // how value is compared with threshold, e.g. "<"
};

struct Report {
    std::string scenario;
    std::string version = kVersion;
    std::string rng;
    std::uint64_t seed = 0;
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json results = nlohmann::json::object();
    std::vector<CheckResult> checks;
    std::string error;  // non-empty when execution failed

    bool passed() const;
    nlohmann::json to_json() const;
    static Report from_json(const nlohmann::json& j);
};

struct ScenarioOutput {
    Report report;
    std::map<std::string, std::string> files;  // side tables by file name
};

/// Runs a validated scenario. Library errors are caught and recorded in the
/// report; `threads` only changes how work is split, never the results.
ScenarioOutput run_scenario(const ScenarioConfig& config, int threads = 1);

/// Writes report.json and the side tables into `dir`.
void write_outputs(const ScenarioOutput& out, const std::filesystem::path& dir);

}  // namespace rotlab
