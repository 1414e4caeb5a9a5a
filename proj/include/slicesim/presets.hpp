#pragma once

#include <cstdint>
#include <string>

#include "slicesim/dqn.hpp"
#include "slicesim/types.hpp"

namespace slicesim {

// Built-in scenario: three training services sharing one edge site. The
// services are sized so that every one of them needs the same total compute
// for a full pass over its data (dataset size times cycles per sample is
// equal across the three) and moves the same payload at full data fraction,
// which makes their slices directly comparable; they differ in how fast their
// accuracy saturates with training effort.
std::vector<ModelSpec> preset_models();

// Perturbed replacements used mid-run. The close set moves every curve
// coefficient by at most ten percent, which reshuffles the near-tied top
// of the landscape but keeps values close. The distinct set rescales
// amplitudes by half or one-and-a-half and re-signs some rates, which both
// drops the value of the previously best action and moves the optimum to a
// different service assignment.
std::vector<ModelSpec> preset_models_drift_close();
std::vector<ModelSpec> preset_models_drift_distinct();

ConstraintSet preset_constraints();

// 4x4x4x4 grid pruned to a 16-entry catalog (4096 joint actions for three
// services) and a 4x10x7x7 grid pruned to 26 entries (17576 joint actions).
GridConfig preset_grid_small();
GridConfig preset_grid_big();

QualityProcess preset_quality_stationary();
// Deterministic quality attacker; frequent toggles every 2 steps, the slower
// variant every 3.
QualityProcess preset_quality_attacker(bool frequent);

RwBudgetConfig preset_budget(double initial_budget);

struct Exp3Params {
    double gamma = 0.001;
};

// Everything a single comparison run needs besides the environment itself.
// Episode lengths follow the step-equivalence convention: one episode is 500
// learner steps for the value-network agent and 10000 for the bandit.
struct RunPreset {
    int64_t exp3_episodes = 0;
    int64_t dqn_episodes = 0;
    int64_t exp3_steps_per_episode = 10000;
    int64_t dqn_steps_per_episode = 500;
    int64_t drift_episode = -1;  // negative = no drift
    Exp3Params exp3;
    DqnConfig dqn;               // num_actions/obs_dim filled in by the harness
    int64_t eval_steps = 2000;   // greedy evaluation, fixed-length runs
    int64_t eval_episodes = 50;  // greedy evaluation, budget-terminated runs
};

// experiment: convergence | nearopt | adversary | budget | timing
// scale: desk (minutes on one core) | paper (original run sizes)
RunPreset preset_run(const std::string& experiment, const std::string& scale);

}  // namespace slicesim
