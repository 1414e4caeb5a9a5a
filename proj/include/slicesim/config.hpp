#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "slicesim/harness.hpp"

namespace slicesim {

// File-level run settings. Every field has a default, so an empty file or an
// empty JSON object is a valid config. Unknown keys are rejected by name so a
// typo cannot silently fall back to a default.
struct RunConfig {
    uint64_t seed = 42;
    std::string scale = "paper";  // paper hyperparameters unless shrunk to desk
    std::string out_dir;         // empty = runs/<experiment>
    std::string agents = "both";
    int64_t replicates = 1;
    std::string drift_case = "both";
    std::optional<int64_t> episodes;
    std::optional<int64_t> drift_episode;
    std::string space = "both";
    std::string attacker = "both";
    std::vector<double> budgets = {500.0, 1000.0, 2000.0};
    std::vector<int64_t> batches = {512, 1024, 2048};
    int64_t timing_steps = 10000;
    std::optional<double> exp3_gamma;
    std::optional<int64_t> dqn_batch;
};

// Throws std::invalid_argument with the offending key path on unknown keys or
// ill-typed values.
RunConfig parse_config(const nlohmann::json& j);

// Reads and parses `path`. A missing file is an error; an empty file yields
// the defaults.
RunConfig load_config(const std::string& path);

nlohmann::json to_json(const RunConfig& cfg);

// FNV-1a over the canonical serialized form (sorted keys, fixed layout).
uint64_t config_hash(const RunConfig& cfg);

RunOptions to_run_options(const RunConfig& cfg);

}  // namespace slicesim
