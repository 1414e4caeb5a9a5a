#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "slicesim/action_space.hpp"
#include "slicesim/rng.hpp"
#include "slicesim/types.hpp"

namespace slicesim {

// Seconds a slice spends computing its training passes.
double training_delay_s(const ModelSpec& m, double data_fraction, int epochs, double cpu_freq);

// Seconds a slice spends moving its training data, access latency included.
double comm_delay_s(const ModelSpec& m, double data_fraction, double data_rate);

// Per-step spend of one slice at current unit prices.
double slice_cost(const SliceVector& s, const ConstraintSet& c);

// Budget drained by one joint action: read cost per epoch plus write cost
// per data unit moved, summed over models.
double budget_decrement(const JointAction& a, const RwBudgetConfig& cfg);

struct Violation {
    enum Kind { edge_cpu, ran_bandwidth, latency, cost } kind;
    int model = -1;  // -1 for shared constraints
};

struct FeasibilityReport {
    bool feasible = true;
    std::vector<Violation> violations;
};

// Checks the shared capacity constraints and each model's latency/cost KPIs.
FeasibilityReport check_feasibility(const JointAction& a, const ConstraintSet& c,
                                    const std::vector<ModelSpec>& models);

// Quality multipliers for step t, one per model.
std::vector<double> next_quality(const QualityProcess& p, int64_t t, int num_models, Rng& rng);

struct StepOutcome {
    double utility = 0.0;  // reported as 0 when the action is infeasible
    std::vector<double> per_model_accuracy;  // quality-free accuracy of the chosen slices
    bool feasible = true;
    std::vector<Violation> violations;
    double reward_exp3 = 0.0;  // in [0, 1]
    double reward_dqn = 0.0;   // utility/M, or -1 on an infeasible pick
    double cost = 0.0;         // summed slice cost of the chosen action
    double budget_decrement = 0.0;  // 0 when the budget is disabled
    std::vector<double> observation;  // observation after the step
};

enum class ObservationMode { single, multi };

struct EnvState {
    int64_t t = 0;
    std::vector<double> quality;  // multipliers drawn for the latest step
    double remaining_budget = std::numeric_limits<double>::infinity();
    std::vector<ModelSpec> models;
    bool terminal = false;
};

struct EnvConfig {
    std::vector<ModelSpec> models;
    ConstraintSet constraints;
    QualityProcess quality;
    std::optional<RwBudgetConfig> budget;
    ObservationMode observation = ObservationMode::single;
};

// Steps the slice-allocation problem: decodes an action, draws quality,
// scores utility against the KPIs and drains the budget. Per-catalog-entry
// evaluations are cached up front so a step is O(num models).
class Environment {
public:
    Environment(EnvConfig cfg, ActionSpace space);

    void reset();
    StepOutcome step(int64_t action_index, Rng& rng);

    // [1.0] in single mode; [remaining/initial] clamped to [0,1] in multi mode
    std::vector<double> observation() const;

    // Swap in a new model set (a drift event). Counters, budget and caches
    // derived from the grid stay put; accuracy and latency tables rebuild.
    void apply_drift(std::vector<ModelSpec> new_models);

    const EnvState& state() const { return state_; }
    const ActionSpace& space() const { return space_; }
    const ConstraintSet& constraints() const { return cfg_.constraints; }
    const QualityProcess& quality_process() const { return cfg_.quality; }
    bool budget_enabled() const { return cfg_.budget.has_value(); }
    const RwBudgetConfig& budget_config() const { return *cfg_.budget; }
    int num_models() const { return static_cast<int>(state_.models.size()); }
    int obs_dim() const { return 1; }

    bool terminal() const { return state_.terminal; }
    double remaining_budget() const { return state_.remaining_budget; }
    // smallest decrement any action can cause; 0 when the budget is disabled
    double min_decrement() const { return min_decrement_; }

    // exact per-action queries used by oracles, evaluation and the harness
    bool is_feasible(int64_t index) const;
    double mean_quality() const;
    // expected utility under mean quality; 0 for infeasible actions
    double expected_utility(int64_t index) const;
    // mean per-model accuracy of the action; 0 for infeasible actions
    double expected_accuracy(int64_t index) const;
    double action_cost(int64_t index) const;
    double action_decrement(int64_t index) const;

private:
    void rebuild_tables();
    void decode_scratch(int64_t index) const;

    EnvConfig cfg_;
    ActionSpace space_;
    EnvState state_;

    // per catalog entry, model independent
    std::vector<double> entry_cpu_;
    std::vector<double> entry_rate_;
    std::vector<double> entry_cost_;
    std::vector<double> entry_decrement_;
    // per model x catalog entry, flattened [model * C + entry]
    std::vector<double> entry_accuracy_;
    std::vector<double> entry_delay_;
    std::vector<char> entry_latency_ok_;
    std::vector<char> entry_cost_ok_;

    double min_decrement_ = 0.0;
    mutable std::vector<int> scratch_entries_;
};

} // namespace slicesim
