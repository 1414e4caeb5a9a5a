#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slicesim/environment.hpp"
#include "slicesim/presets.hpp"

namespace slicesim {

// One line of the per-episode log. Wall-clock time is deliberately not here;
// identical (config, seed) runs must produce byte-identical logs.
struct EpisodeRecord {
    std::string experiment;
    std::string cell;
    std::string agent;
    std::string phase;  // train | eval
    int64_t episode = 0;
    int64_t steps = 0;
    double mean_utility = 0.0;
    double mean_accuracy = 0.0;  // percent; infeasible steps score zero
    double mean_cost = 0.0;
    double exploration = 0.0;    // epsilon, or bandit policy entropy in nats
    double remaining_budget = -1.0;  // -1 when the run has no budget
};

// First episode index from which the windowed moving average stays put for
// the rest of the series. MA(e) averages series[max(0, e-window+1) .. e]; the
// change test at episode e compares MA(e) against MA(e-window) relative to
// the older value. The detector returns the smallest e >= window such that
// the test passes at every episode from e through the end, and the settled
// tail must span at least `window` episodes, so a flat stretch before a late
// jump never counts. A series shorter than 2*window yields nothing; a
// constant series detects exactly at `window`.
std::optional<int64_t> detect_convergence(const std::vector<double>& series,
                                          int64_t window = 20, double tol = 0.01);

// Percent advantage of configuration A over configuration B where each side
// is summarized by (steps, accuracy): 100 * (sa*aa - sb*ab) / (sb*ab).
double compute_advantage(double steps_a, double acc_a, double steps_b, double acc_b);

enum class AgentKind { exp3, dqn };
std::string agent_name(AgentKind kind);

// A single training run: one environment, one agent, one seed.
struct CellSpec {
    std::string experiment;
    std::string cell;  // unique id; the run seed derives from it
    AgentKind agent = AgentKind::exp3;
    EnvConfig env;
    GridConfig grid;
    int64_t episodes = 0;
    int64_t steps_per_episode = 0;  // 0 = run each episode until the budget ends
    int64_t drift_episode = -1;     // models swap when this episode begins
    std::vector<ModelSpec> drift_models;
    Exp3Params exp3;
    DqnConfig dqn;  // num_actions and obs_dim are filled in from the space
    int64_t eval_steps = 0;     // greedy evaluation, fixed-length runs
    int64_t eval_episodes = 0;  // greedy evaluation, budget-terminated runs
};

struct CellResult {
    std::string cell;
    AgentKind agent = AgentKind::exp3;
    int64_t k_actions = 0;
    int64_t episodes = 0;
    int64_t steps_per_episode = 0;
    int64_t train_env_steps = 0;
    std::optional<int64_t> conv_initial;     // episode index within the run
    std::optional<int64_t> conv_post_drift;  // episodes after the drift point
    double final_utility = 0.0;   // behavior mean over the last fifth of training
    double final_accuracy = 0.0;  // percent, same window
    double eval_utility = 0.0;
    double eval_accuracy = 0.0;   // percent
    double eval_expected_utility = 0.0;  // noise-free value of the greedy action
    double eval_mean_steps = 0.0;    // budget runs: greedy episode length
    double eval_median_steps = 0.0;
    double best_expected_utility = 0.0;  // exhaustive scan, current models
    int64_t best_action = -1;
    int64_t greedy_action = -1;
    std::vector<EpisodeRecord> records;
};

CellResult run_cell(const CellSpec& spec, uint64_t master_seed);

// Exhaustive scan over the joint action space; returns the best action index
// and its expected utility under the environment's current models.
std::pair<int64_t, double> enumerate_best(const Environment& env);

struct RunOptions {
    std::string scale = "desk";
    uint64_t seed = 42;
    int64_t replicates = 1;          // seeds per cell, suffixed _s0, _s1, ...
    std::string agents = "both";     // exp3 | dqn | both
    std::string drift_case = "both"; // close | distinct | both | none
    std::string space = "small";     // small | big | both
    std::string attacker = "both";   // frequent | slow | both
    std::vector<double> budgets = {500.0, 1000.0, 2000.0};
    std::vector<int64_t> batches = {512, 1024, 2048};
    int64_t timing_steps = 10000;
    std::optional<int64_t> episodes;
    std::optional<int64_t> drift_episode;
    std::optional<double> exp3_gamma;
    std::optional<int64_t> dqn_batch;
};

struct AdvantageRow {
    std::string label;
    double dqn_steps = 0.0, dqn_accuracy = 0.0, dqn_advantage = 0.0;
    double exp3_steps = 0.0, exp3_accuracy = 0.0, exp3_advantage = 0.0;
};

struct TimingRow {
    std::string agent;
    int64_t batch = 0;       // 0 for the bandit
    double us_per_step = 0.0;  // median over measured blocks
};

struct ExperimentResult {
    std::string experiment;
    std::string scale;
    uint64_t seed = 0;
    std::vector<CellResult> cells;
    std::vector<AdvantageRow> advantage;  // budget runs
    std::vector<TimingRow> timing;        // timing runs
    double exp3_steps_per_dqn_step = 0.0;
    double reference_band_lo = 2.5;
    double reference_band_hi = 3.0;
    double wall_ms = 0.0;
};

// experiment: convergence | adversary | budget | timing.
// The convergence experiment honors drift_case, including "none" for the
// stationary long-run variant.
ExperimentResult run_experiment(const std::string& experiment, const RunOptions& options);

}  // namespace slicesim
