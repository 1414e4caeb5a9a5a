#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "slicesim/accuracy.hpp"
#include "slicesim/config.hpp"
#include "slicesim/environment.hpp"
#include "slicesim/io.hpp"
#include "slicesim/presets.hpp"

namespace {

using namespace slicesim;

struct CliArgs {
    std::string config_path;
    std::string out_dir;
    uint64_t seed = 0;
    std::string scale;
    std::string agents;
    int64_t replicates = 0;
    std::string drift_case;
    std::string space;
    std::string attacker;
    int64_t episodes = 0;
    int64_t drift_episode = -1;
    double exp3_gamma = 0.0;
    int64_t dqn_batch = 0;
    std::vector<double> budgets;
    std::vector<int64_t> batches;
    int64_t timing_steps = 0;
};

void add_common_flags(CLI::App* cmd, CliArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "master seed");
    cmd->add_option("--scale", args.scale, "desk or paper")
        ->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--agent", args.agents, "exp3, dqn or both")
        ->check(CLI::IsMember({"exp3", "dqn", "both"}));
    cmd->add_option("--replicates", args.replicates, "seeds per cell")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--episodes", args.episodes, "training episodes override")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--exp3-gamma", args.exp3_gamma, "bandit exploration rate override");
    cmd->add_option("--dqn-batch", args.dqn_batch, "minibatch size override")
        ->check(CLI::PositiveNumber);
}

// count() throws on options the subcommand never defined, so probe first.
bool given(const CLI::App* cmd, const std::string& name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

void apply_overrides(const CLI::App* cmd, const CliArgs& args, RunConfig& cfg) {
    if (given(cmd, "--seed")) cfg.seed = args.seed;
    if (given(cmd, "--scale")) cfg.scale = args.scale;
    if (given(cmd, "--agent")) cfg.agents = args.agents;
    if (given(cmd, "--replicates")) cfg.replicates = args.replicates;
    if (given(cmd, "--episodes")) cfg.episodes = args.episodes;
    if (given(cmd, "--exp3-gamma")) cfg.exp3_gamma = args.exp3_gamma;
    if (given(cmd, "--dqn-batch")) cfg.dqn_batch = args.dqn_batch;
    if (given(cmd, "--out")) cfg.out_dir = args.out_dir;
    if (given(cmd, "--case")) cfg.drift_case = args.drift_case;
    if (given(cmd, "--drift")) cfg.drift_episode = args.drift_episode;
    if (given(cmd, "--space")) cfg.space = args.space;
    if (given(cmd, "--attacker")) cfg.attacker = args.attacker;
    if (given(cmd, "--budget")) cfg.budgets = args.budgets;
    if (given(cmd, "--batch")) cfg.batches = args.batches;
    if (given(cmd, "--steps")) cfg.timing_steps = args.timing_steps;
}

std::string resolve_out_dir(const RunConfig& cfg, const std::string& experiment) {
    if (!cfg.out_dir.empty()) return cfg.out_dir;
    if (const char* env = std::getenv("SLICESIM_OUT"); env != nullptr && *env != '\0') {
        return std::string(env) + "/" + experiment;
    }
    return default_out_dir(experiment);
}

void print_brief(const ExperimentResult& result, const std::string& dir) {
    std::printf("experiment=%s scale=%s seed=%llu cells=%zu wall_ms=%.0f\n",
                result.experiment.c_str(), result.scale.c_str(),
                static_cast<unsigned long long>(result.seed), result.cells.size(),
                result.wall_ms);
    for (const CellResult& cell : result.cells) {
        std::printf("  %-28s K=%-6lld conv=%s", cell.cell.c_str(),
                    static_cast<long long>(cell.k_actions),
                    cell.conv_initial ? std::to_string(*cell.conv_initial).c_str() : "-");
        if (cell.conv_post_drift) {
            std::printf(" conv_post=%lld", static_cast<long long>(*cell.conv_post_drift));
        }
        std::printf(" final_acc=%.2f eval_u=%.4f best_u=%.4f", cell.final_accuracy,
                    cell.eval_utility, cell.best_expected_utility);
        if (cell.eval_median_steps > 0) {
            std::printf(" eval_steps=%.1f", cell.eval_median_steps);
        }
        std::printf("\n");
    }
    for (const AdvantageRow& row : result.advantage) {
        std::printf("  budget=%s dqn=(%.1f steps, %.2f%%) exp3=(%.1f steps, %.2f%%) "
                    "advantage dqn=%.2f%% exp3=%.2f%%\n",
                    row.label.c_str(), row.dqn_steps, row.dqn_accuracy, row.exp3_steps,
                    row.exp3_accuracy, row.dqn_advantage, row.exp3_advantage);
    }
    for (const TimingRow& row : result.timing) {
        if (row.batch > 0) {
            std::printf("  %s batch=%lld: %.2f us/step\n", row.agent.c_str(),
                        static_cast<long long>(row.batch), row.us_per_step);
        } else {
            std::printf("  %s: %.2f us/step\n", row.agent.c_str(), row.us_per_step);
        }
    }
    if (result.exp3_steps_per_dqn_step > 0.0) {
        std::printf("  exp3 steps per dqn step: %.2f (reference band %.1f-%.1f)\n",
                    result.exp3_steps_per_dqn_step, result.reference_band_lo,
                    result.reference_band_hi);
    }
    std::printf("outputs: %s\n", dir.c_str());
}

int run_command(const std::string& experiment, const CLI::App* cmd, const CliArgs& args) {
    RunConfig cfg =
        args.config_path.empty() ? RunConfig{} : load_config(args.config_path);
    apply_overrides(cmd, args, cfg);
    RunOptions options = to_run_options(cfg);
    ExperimentResult result = run_experiment(experiment, options);
    std::string dir = resolve_out_dir(cfg, experiment);
    write_outputs(dir, cfg, result);
    print_brief(result, dir);
    return 0;
}

// Dumps the discretized space and its feasibility landscape. Pure table
// enumeration, no agent is run.
int print_landscape(const std::string& space_name) {
    GridConfig grid = space_name == "big" ? preset_grid_big() : preset_grid_small();
    std::vector<ModelSpec> models = preset_models();
    ActionSpace space = ActionSpace::build(grid, static_cast<int>(models.size()));
    EnvConfig cfg;
    cfg.models = models;
    cfg.constraints = preset_constraints();
    cfg.quality = preset_quality_stationary();
    Environment env(cfg, space);
    env.reset();

    nlohmann::json j;
    j["space"] = space_name;
    j["joint_actions"] = space.size();
    j["catalog_size"] = static_cast<int64_t>(space.catalog().size());
    j["catalog"] = nlohmann::json::array();
    for (const SliceVector& s : space.catalog()) {
        nlohmann::json entry;
        entry["data_fraction"] = s.data_fraction;
        entry["epochs"] = s.epochs;
        entry["cpu_freq"] = s.cpu_freq;
        entry["data_rate"] = s.data_rate;
        JointAction probe;
        probe.slices.assign(models.size(), s);
        nlohmann::json per_model = nlohmann::json::array();
        for (size_t m = 0; m < models.size(); ++m) {
            nlohmann::json pm;
            double u = normalized_effort(s.data_fraction, s.epochs, space.max_epochs());
            pm["model"] = models[m].id;
            pm["effort"] = u;
            pm["accuracy"] = models[m].accuracy.evaluate(u);
            pm["training_delay_s"] =
                training_delay_s(models[m], s.data_fraction, s.epochs, s.cpu_freq);
            pm["comm_delay_s"] = comm_delay_s(models[m], s.data_fraction, s.data_rate);
            pm["cost"] = slice_cost(s, cfg.constraints);
            per_model.push_back(pm);
        }
        entry["per_model"] = per_model;
        j["catalog"].push_back(entry);
    }

    int64_t feasible = 0;
    for (int64_t i = 0; i < space.size(); ++i) {
        if (env.is_feasible(i)) ++feasible;
    }
    j["feasible_actions"] = feasible;

    auto [best, best_u] = enumerate_best(env);
    j["best_action"] = best;
    j["best_expected_utility"] = best_u;

    // The ten strongest actions, to show the shape of the top of the landscape.
    std::vector<std::pair<double, int64_t>> ranked;
    ranked.reserve(static_cast<size_t>(space.size()));
    for (int64_t i = 0; i < space.size(); ++i) {
        ranked.emplace_back(env.expected_utility(i), i);
    }
    std::partial_sort(ranked.begin(), ranked.begin() + std::min<size_t>(10, ranked.size()),
                      ranked.end(), [](const auto& a, const auto& b) {
                          return a.first > b.first || (a.first == b.first && a.second < b.second);
                      });
    j["top_actions"] = nlohmann::json::array();
    for (size_t i = 0; i < std::min<size_t>(10, ranked.size()); ++i) {
        nlohmann::json row;
        row["action"] = ranked[i].second;
        row["expected_utility"] = ranked[i].first;
        JointAction a = space.decode(ranked[i].second);
        nlohmann::json slices = nlohmann::json::array();
        for (const SliceVector& s : a.slices) {
            slices.push_back({{"data_fraction", s.data_fraction},
                              {"epochs", s.epochs},
                              {"cpu_freq", s.cpu_freq},
                              {"data_rate", s.data_rate}});
        }
        row["slices"] = slices;
        j["top_actions"].push_back(row);
    }

    std::cout << j.dump(2) << std::endl;
    return 0;
}

// Config checking only: parse, validate, echo the canonical form. Returns
// nonzero (via the caller's catch) when the file is rejected.
int run_validate(const std::string& config_path, bool landscape,
                 const std::string& space_name) {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    nlohmann::json j;
    j["ok"] = true;
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    j["config_hash"] = hash_hex;
    j["config"] = to_json(cfg);
    std::cout << j.dump(2) << std::endl;
    if (landscape) return print_landscape(space_name);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"network slice allocation testbed: bandit vs value learner"};
    app.require_subcommand(1);

    CliArgs args;

    CLI::App* conv = app.add_subcommand(
        "convergence", "train both agents, optionally with a mid-run model swap");
    add_common_flags(conv, args);
    conv->add_option("--case", args.drift_case, "close, distinct, both or none")
        ->check(CLI::IsMember({"close", "distinct", "both", "none"}));
    conv->add_option("--drift", args.drift_episode, "episode at which models swap")
        ->check(CLI::NonNegativeNumber);

    CLI::App* adv = app.add_subcommand(
        "adversary", "train under a deterministic quality attacker");
    add_common_flags(adv, args);
    adv->add_option("--space", args.space, "small, big or both")
        ->check(CLI::IsMember({"small", "big", "both"}));
    adv->add_option("--attacker", args.attacker, "frequent, slow or both")
        ->check(CLI::IsMember({"frequent", "slow", "both"}));

    CLI::App* bud = app.add_subcommand(
        "budget", "episodes end when the read/write budget runs out");
    add_common_flags(bud, args);
    bud->add_option("--budget", args.budgets, "budget levels to sweep");

    CLI::App* tim = app.add_subcommand("timing", "per-step cost measurements");
    add_common_flags(tim, args);
    tim->add_option("--batch", args.batches, "minibatch sizes to sweep");
    tim->add_option("--steps", args.timing_steps, "measured steps per row")
        ->check(CLI::PositiveNumber);

    CLI::App* val = app.add_subcommand("validate", "check a config file, no simulation");
    std::string val_config;
    std::string val_space = "small";
    bool val_landscape = false;
    val->add_option("--config", val_config, "JSON config file to check");
    val->add_flag("--landscape", val_landscape, "also dump the action space tables");
    val->add_option("--space", val_space, "small or big (with --landscape)")
        ->check(CLI::IsMember({"small", "big"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (val->parsed()) return run_validate(val_config, val_landscape, val_space);
        if (conv->parsed()) return run_command("convergence", conv, args);
        if (adv->parsed()) return run_command("adversary", adv, args);
        if (bud->parsed()) return run_command("budget", bud, args);
        if (tim->parsed()) return run_command("timing", tim, args);
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"] = e.what();
        std::cerr << err.dump() << std::endl;
        return 1;
    }
    return 0;
}
