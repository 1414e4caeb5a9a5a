#include "slicesim/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace slicesim {

namespace {

std::string fixed6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

std::string config_hash_hex(const RunConfig& cfg) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    return buf;
}

nlohmann::json cell_json(const CellResult& cell) {
    nlohmann::json j;
    j["cell"] = cell.cell;
    j["agent"] = agent_name(cell.agent);
    j["k_actions"] = cell.k_actions;
    j["episodes"] = cell.episodes;
    j["steps_per_episode"] = cell.steps_per_episode;
    j["train_env_steps"] = cell.train_env_steps;
    j["convergence_episode"] =
        cell.conv_initial ? nlohmann::json(*cell.conv_initial) : nlohmann::json();
    j["convergence_env_steps"] =
        cell.conv_initial && cell.steps_per_episode > 0
            ? nlohmann::json(*cell.conv_initial * cell.steps_per_episode)
            : nlohmann::json();
    j["convergence_post_drift_episode"] =
        cell.conv_post_drift ? nlohmann::json(*cell.conv_post_drift) : nlohmann::json();
    j["convergence_post_drift_env_steps"] =
        cell.conv_post_drift && cell.steps_per_episode > 0
            ? nlohmann::json(*cell.conv_post_drift * cell.steps_per_episode)
            : nlohmann::json();
    j["final_utility"] = cell.final_utility;
    j["final_accuracy"] = cell.final_accuracy;
    j["eval_utility"] = cell.eval_utility;
    j["eval_accuracy"] = cell.eval_accuracy;
    j["eval_expected_utility"] = cell.eval_expected_utility;
    j["eval_mean_steps"] = cell.eval_mean_steps;
    j["eval_median_steps"] = cell.eval_median_steps;
    j["best_expected_utility"] = cell.best_expected_utility;
    j["best_action"] = cell.best_action;
    j["greedy_action"] = cell.greedy_action;
    return j;
}

}  // namespace

std::vector<EpisodeRecord> collect_records(const ExperimentResult& result) {
    std::vector<EpisodeRecord> all;
    size_t total = 0;
    for (const CellResult& cell : result.cells) total += cell.records.size();
    all.reserve(total);
    for (const CellResult& cell : result.cells) {
        all.insert(all.end(), cell.records.begin(), cell.records.end());
    }
    return all;
}

void write_episodes_csv(const std::string& path, const RunConfig& cfg,
                        const std::vector<EpisodeRecord>& records) {
    std::ofstream out = open_out(path);
    out << "# schema=episodes-v1 config_hash=" << config_hash_hex(cfg) << '\n';
    out << "experiment,cell,agent,phase,episode,steps,mean_utility,mean_accuracy,"
           "mean_cost,exploration,remaining_budget\n";
    for (const EpisodeRecord& r : records) {
        out << r.experiment << ',' << r.cell << ',' << r.agent << ',' << r.phase << ','
            << r.episode << ',' << r.steps << ',' << fixed6(r.mean_utility) << ','
            << fixed6(r.mean_accuracy) << ',' << fixed6(r.mean_cost) << ','
            << fixed6(r.exploration) << ',' << fixed6(r.remaining_budget) << '\n';
    }
}

void write_timings_csv(const std::string& path, const RunConfig& cfg,
                       const ExperimentResult& result) {
    std::ofstream out = open_out(path);
    out << "# schema=timings-v1 config_hash=" << config_hash_hex(cfg) << '\n';
    out << "metric,label,value\n";
    out << "wall_ms,total," << fixed6(result.wall_ms) << '\n';
    for (const TimingRow& row : result.timing) {
        std::string label = row.agent;
        if (row.batch > 0) label += "_batch" + std::to_string(row.batch);
        out << "step_us," << label << ',' << fixed6(row.us_per_step) << '\n';
    }
    if (result.exp3_steps_per_dqn_step > 0.0) {
        double ratio = result.exp3_steps_per_dqn_step;
        out << "exp3_steps_per_dqn_step,measured," << fixed6(ratio) << '\n';
        out << "exp3_steps_per_dqn_step,reference_lo,"
            << fixed6(result.reference_band_lo) << '\n';
        out << "exp3_steps_per_dqn_step,reference_hi,"
            << fixed6(result.reference_band_hi) << '\n';
        // Time-equivalence mapping for annotating learning curves: one DQN
        // plot episode is 500 env steps, one for EXP3 is 10000, so a DQN
        // episode costs as much wall time as ratio*500 EXP3 steps.
        out << "time_equivalence,exp3_steps_per_dqn_episode,"
            << fixed6(ratio * 500.0) << '\n';
        out << "time_equivalence,exp3_episodes_per_dqn_episode,"
            << fixed6(ratio * 500.0 / 10000.0) << '\n';
    }
}

void write_summary_json(const std::string& path, const RunConfig& cfg,
                        const ExperimentResult& result) {
    nlohmann::json j;
    j["schema"] = "summary-v1";
    j["config_hash"] = config_hash_hex(cfg);
    j["experiment"] = result.experiment;
    j["scale"] = result.scale;
    j["seed"] = result.seed;
    j["cells"] = nlohmann::json::array();
    for (const CellResult& cell : result.cells) {
        j["cells"].push_back(cell_json(cell));
    }
    if (!result.advantage.empty()) {
        j["advantage"] = nlohmann::json::array();
        for (const AdvantageRow& row : result.advantage) {
            nlohmann::json r;
            r["budget"] = row.label;
            r["dqn_steps"] = row.dqn_steps;
            r["dqn_accuracy"] = row.dqn_accuracy;
            r["dqn_advantage"] = row.dqn_advantage;
            r["exp3_steps"] = row.exp3_steps;
            r["exp3_accuracy"] = row.exp3_accuracy;
            r["exp3_advantage"] = row.exp3_advantage;
            j["advantage"].push_back(r);
        }
    }
    if (!result.timing.empty()) {
        j["timing"] = nlohmann::json::array();
        for (const TimingRow& row : result.timing) {
            nlohmann::json r;
            r["agent"] = row.agent;
            r["batch"] = row.batch;
            r["us_per_step"] = row.us_per_step;
            j["timing"].push_back(r);
        }
        j["exp3_steps_per_dqn_step"] = result.exp3_steps_per_dqn_step;
        j["reference_band"] = {result.reference_band_lo, result.reference_band_hi};
    }
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_run_meta(const std::string& path, const RunConfig& cfg,
                    const ExperimentResult& result) {
    nlohmann::json j;
    j["schema"] = "run-meta-v1";
    j["config"] = to_json(cfg);
    j["config_hash"] = config_hash_hex(cfg);
    j["seed"] = cfg.seed;
    j["seed_derivation"] =
        "cell_seed = mix64(master_seed xor fnv1a64(cell_name)); agents and "
        "evaluation draw from one generator per cell";
    j["cell_seeds"] = nlohmann::json::object();
    for (const CellResult& cell : result.cells) {
        char seed_hex[32];
        std::snprintf(seed_hex, sizeof seed_hex, "%016llx",
                      static_cast<unsigned long long>(derive_seed(cfg.seed, cell.cell)));
        j["cell_seeds"][cell.cell] = seed_hex;
    }
    j["wall_ms"] = result.wall_ms;
    j["versions"]["project"] = "0.1.0";
    j["versions"]["compiler"] = __VERSION__;
    j["versions"]["cpp"] = static_cast<int64_t>(__cplusplus);
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

std::string default_out_dir(const std::string& experiment) {
    return "runs/" + experiment;
}

void write_outputs(const std::string& dir, const RunConfig& cfg,
                   const ExperimentResult& result) {
    std::filesystem::create_directories(dir);
    write_episodes_csv(dir + "/episodes.csv", cfg, collect_records(result));
    write_timings_csv(dir + "/timings.csv", cfg, result);
    write_summary_json(dir + "/summary.json", cfg, result);
    write_run_meta(dir + "/run_meta.json", cfg, result);
}

}  // namespace slicesim
