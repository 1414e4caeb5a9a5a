#include "slicesim/config.hpp"

#include <cctype>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>

namespace slicesim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::invalid_argument("config: " + path + ": " + what);
}

void expect_keys(const json& obj, const std::string& path,
                 std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                ok = true;
                break;
            }
        }
        if (!ok) fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
    }
}

template <typename T>
void read_scalar(const json& obj, const std::string& path, const char* key, T& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        out = it->get<T>();
    } catch (const json::exception&) {
        fail(path.empty() ? key : path + "." + key, "wrong type");
    }
}

template <typename T>
void read_optional(const json& obj, const std::string& path, const char* key,
                   std::optional<T>& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        out = it->get<T>();
    } catch (const json::exception&) {
        fail(path.empty() ? key : path + "." + key, "wrong type");
    }
}

template <typename T>
void read_list(const json& obj, const std::string& path, const char* key,
               std::vector<T>& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_array() || it->empty()) {
        fail(path + "." + key, "expected a non-empty array");
    }
    std::vector<T> values;
    for (const json& v : *it) {
        try {
            values.push_back(v.get<T>());
        } catch (const json::exception&) {
            fail(path + "." + key, "wrong element type");
        }
    }
    out = std::move(values);
}

}  // namespace

RunConfig parse_config(const json& j) {
    RunConfig cfg;
    if (j.is_null()) return cfg;
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

    expect_keys(j, "", {"seed", "scale", "out_dir", "agents", "replicates", "convergence",
                        "adversary", "budget", "timing", "exp3", "dqn"});
    read_scalar(j, "", "seed", cfg.seed);
    read_scalar(j, "", "scale", cfg.scale);
    read_scalar(j, "", "out_dir", cfg.out_dir);
    read_scalar(j, "", "agents", cfg.agents);
    read_scalar(j, "", "replicates", cfg.replicates);

    if (auto it = j.find("convergence"); it != j.end()) {
        expect_keys(*it, "convergence", {"case", "episodes", "drift_episode"});
        read_scalar(*it, "convergence", "case", cfg.drift_case);
        read_optional(*it, "convergence", "episodes", cfg.episodes);
        read_optional(*it, "convergence", "drift_episode", cfg.drift_episode);
    }
    if (auto it = j.find("adversary"); it != j.end()) {
        expect_keys(*it, "adversary", {"space", "attacker", "episodes"});
        read_scalar(*it, "adversary", "space", cfg.space);
        read_scalar(*it, "adversary", "attacker", cfg.attacker);
        read_optional(*it, "adversary", "episodes", cfg.episodes);
    }
    if (auto it = j.find("budget"); it != j.end()) {
        expect_keys(*it, "budget", {"budgets", "episodes"});
        read_list(*it, "budget", "budgets", cfg.budgets);
        read_optional(*it, "budget", "episodes", cfg.episodes);
    }
    if (auto it = j.find("timing"); it != j.end()) {
        expect_keys(*it, "timing", {"batches", "steps"});
        read_list(*it, "timing", "batches", cfg.batches);
        read_scalar(*it, "timing", "steps", cfg.timing_steps);
    }
    if (auto it = j.find("exp3"); it != j.end()) {
        expect_keys(*it, "exp3", {"gamma"});
        read_optional(*it, "exp3", "gamma", cfg.exp3_gamma);
    }
    if (auto it = j.find("dqn"); it != j.end()) {
        expect_keys(*it, "dqn", {"batch_size"});
        read_optional(*it, "dqn", "batch_size", cfg.dqn_batch);
    }

    if (cfg.scale != "desk" && cfg.scale != "paper") fail("scale", "must be desk or paper");
    if (cfg.replicates <= 0) fail("replicates", "must be positive");
    if (cfg.timing_steps <= 0) fail("timing.steps", "must be positive");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    bool blank = true;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) {
            blank = false;
            break;
        }
    }
    if (blank) return RunConfig{};
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw std::invalid_argument("config: '" + path + "' is not valid JSON");
    return parse_config(j);
}

nlohmann::json to_json(const RunConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    j["scale"] = cfg.scale;
    j["out_dir"] = cfg.out_dir;
    j["agents"] = cfg.agents;
    j["replicates"] = cfg.replicates;
    j["convergence"]["case"] = cfg.drift_case;
    if (cfg.episodes) j["convergence"]["episodes"] = *cfg.episodes;
    if (cfg.drift_episode) j["convergence"]["drift_episode"] = *cfg.drift_episode;
    j["adversary"]["space"] = cfg.space;
    j["adversary"]["attacker"] = cfg.attacker;
    j["budget"]["budgets"] = cfg.budgets;
    j["timing"]["batches"] = cfg.batches;
    j["timing"]["steps"] = cfg.timing_steps;
    if (cfg.exp3_gamma) j["exp3"]["gamma"] = *cfg.exp3_gamma;
    if (cfg.dqn_batch) j["dqn"]["batch_size"] = *cfg.dqn_batch;
    return j;
}

uint64_t config_hash(const RunConfig& cfg) {
    return fnv1a64(to_json(cfg).dump());
}

RunOptions to_run_options(const RunConfig& cfg) {
    RunOptions opt;
    opt.scale = cfg.scale;
    opt.seed = cfg.seed;
    opt.replicates = cfg.replicates;
    opt.agents = cfg.agents;
    opt.drift_case = cfg.drift_case;
    opt.space = cfg.space;
    opt.attacker = cfg.attacker;
    opt.budgets = cfg.budgets;
    opt.batches = cfg.batches;
    opt.timing_steps = cfg.timing_steps;
    opt.episodes = cfg.episodes;
    opt.drift_episode = cfg.drift_episode;
    opt.exp3_gamma = cfg.exp3_gamma;
    opt.dqn_batch = cfg.dqn_batch;
    return opt;
}

}  // namespace slicesim
