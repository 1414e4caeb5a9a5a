#include "slicesim/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace slicesim {

double training_delay_s(const ModelSpec& m, double data_fraction, int epochs, double cpu_freq) {
    const double samples = data_fraction * m.dataset_size;
    return static_cast<double>(epochs) * samples * m.cycles_per_sample / cpu_freq;
}

double comm_delay_s(const ModelSpec& m, double data_fraction, double data_rate) {
    const double payload_bits = data_fraction * m.dataset_size * m.sample_size_bits;
    return payload_bits / data_rate + m.access_delay_s;
}

double slice_cost(const SliceVector& s, const ConstraintSet& c) {
    return s.cpu_freq * c.cpu_unit_price + s.data_rate * c.rate_unit_price;
}

double budget_decrement(const JointAction& a, const RwBudgetConfig& cfg) {
    double total = 0.0;
    for (const SliceVector& s : a.slices) {
        const double data_units = s.data_fraction * cfg.data_units_max;
        total += cfg.read_cost * static_cast<double>(s.epochs) + cfg.write_cost * data_units;
    }
    return total;
}

FeasibilityReport check_feasibility(const JointAction& a, const ConstraintSet& c,
                                    const std::vector<ModelSpec>& models) {
    if (a.slices.size() != models.size())
        throw std::invalid_argument("check_feasibility: slice count != model count");
    FeasibilityReport report;
    double cpu_sum = 0.0;
    double rate_sum = 0.0;
    for (size_t m = 0; m < models.size(); ++m) {
        const SliceVector& s = a.slices[m];
        cpu_sum += s.cpu_freq;
        rate_sum += s.data_rate;
        const double delay = training_delay_s(models[m], s.data_fraction, s.epochs, s.cpu_freq) +
                             comm_delay_s(models[m], s.data_fraction, s.data_rate);
        if (delay > models[m].latency_kpi_s)
            report.violations.push_back({Violation::latency, static_cast<int>(m)});
        if (slice_cost(s, c) > models[m].cost_kpi)
            report.violations.push_back({Violation::cost, static_cast<int>(m)});
    }
    if (cpu_sum > c.edge_cpu_capacity)
        report.violations.push_back({Violation::edge_cpu, -1});
    if (rate_sum > c.ran_bandwidth)
        report.violations.push_back({Violation::ran_bandwidth, -1});
    report.feasible = report.violations.empty();
    return report;
}

std::vector<double> next_quality(const QualityProcess& p, int64_t t, int num_models, Rng& rng) {
    std::vector<double> q(static_cast<size_t>(num_models));
    if (p.mode == QualityMode::stationary) {
        for (double& v : q) v = rng.uniform(p.q_low, p.q_high);
    } else {
        const bool high = ((t / p.period) % 2) == 0;
        std::fill(q.begin(), q.end(), high ? p.q_high : p.q_low);
    }
    return q;
}

Environment::Environment(EnvConfig cfg, ActionSpace space)
    : cfg_(std::move(cfg)), space_(std::move(space)) {
    if (cfg_.models.empty()) throw std::invalid_argument("Environment: no models");
    if (static_cast<int>(cfg_.models.size()) != space_.num_models())
        throw std::invalid_argument("Environment: model count != action space model count");
    for (const ModelSpec& m : cfg_.models) validate(m);
    validate(cfg_.constraints);
    validate(cfg_.quality);
    if (cfg_.budget) validate(*cfg_.budget);
    if (cfg_.observation == ObservationMode::multi && !cfg_.budget)
        throw std::invalid_argument("Environment: multi observation mode needs a budget");
    scratch_entries_.resize(cfg_.models.size());
    state_.models = cfg_.models;
    rebuild_tables();
    reset();
}

void Environment::rebuild_tables() {
    const std::vector<SliceVector>& cat = space_.catalog();
    const size_t c = cat.size();
    const size_t mcount = state_.models.size();

    entry_cpu_.resize(c);
    entry_rate_.resize(c);
    entry_cost_.resize(c);
    entry_decrement_.assign(c, 0.0);
    for (size_t j = 0; j < c; ++j) {
        entry_cpu_[j] = cat[j].cpu_freq;
        entry_rate_[j] = cat[j].data_rate;
        entry_cost_[j] = slice_cost(cat[j], cfg_.constraints);
        if (cfg_.budget) {
            const double data_units = cat[j].data_fraction * cfg_.budget->data_units_max;
            entry_decrement_[j] = cfg_.budget->read_cost * static_cast<double>(cat[j].epochs) +
                                  cfg_.budget->write_cost * data_units;
        }
    }

    entry_accuracy_.resize(mcount * c);
    entry_delay_.resize(mcount * c);
    entry_latency_ok_.resize(mcount * c);
    entry_cost_ok_.resize(mcount * c);
    for (size_t m = 0; m < mcount; ++m) {
        const ModelSpec& spec = state_.models[m];
        for (size_t j = 0; j < c; ++j) {
            const SliceVector& s = cat[j];
            const double u = normalized_effort(s.data_fraction, s.epochs, space_.max_epochs());
            const double delay = training_delay_s(spec, s.data_fraction, s.epochs, s.cpu_freq) +
                                 comm_delay_s(spec, s.data_fraction, s.data_rate);
            entry_accuracy_[m * c + j] = spec.accuracy.evaluate(u);
            entry_delay_[m * c + j] = delay;
            entry_latency_ok_[m * c + j] = delay <= spec.latency_kpi_s ? 1 : 0;
            entry_cost_ok_[m * c + j] = entry_cost_[j] <= spec.cost_kpi ? 1 : 0;
        }
    }

    min_decrement_ = 0.0;
    if (cfg_.budget) {
        double per_entry_min = entry_decrement_[0];
        for (size_t j = 1; j < c; ++j) per_entry_min = std::min(per_entry_min, entry_decrement_[j]);
        min_decrement_ = per_entry_min * static_cast<double>(mcount);
        if (!(min_decrement_ > 0.0)) {
            throw std::invalid_argument(
                "Environment: budget enabled but some action drains nothing, episodes would never end");
        }
    }
}

void Environment::reset() {
    state_.t = 0;
    state_.quality.assign(state_.models.size(), 0.0);
    state_.remaining_budget =
        cfg_.budget ? cfg_.budget->initial_budget : std::numeric_limits<double>::infinity();
    state_.terminal = cfg_.budget && state_.remaining_budget < min_decrement_;
}

std::vector<double> Environment::observation() const {
    if (cfg_.observation == ObservationMode::single) return {1.0};
    const double frac = state_.remaining_budget / cfg_.budget->initial_budget;
    return {std::clamp(frac, 0.0, 1.0)};
}

void Environment::decode_scratch(int64_t index) const {
    space_.decode_entries(index, scratch_entries_.data());
}

StepOutcome Environment::step(int64_t action_index, Rng& rng) {
    if (state_.terminal)
        throw std::logic_error("Environment: step on a terminal state");
    if (action_index < 0 || action_index >= space_.size())
        throw std::out_of_range("Environment: action index " + std::to_string(action_index) +
                                " outside [0, " + std::to_string(space_.size()) + ")");

    const size_t c = space_.catalog().size();
    const size_t mcount = state_.models.size();
    decode_scratch(action_index);

    state_.quality = next_quality(cfg_.quality, state_.t, static_cast<int>(mcount), rng);

    StepOutcome out;
    out.per_model_accuracy.resize(mcount);
    double cpu_sum = 0.0;
    double rate_sum = 0.0;
    double utility = 0.0;
    for (size_t m = 0; m < mcount; ++m) {
        const size_t j = static_cast<size_t>(scratch_entries_[m]);
        out.per_model_accuracy[m] = entry_accuracy_[m * c + j];
        utility += entry_accuracy_[m * c + j] * state_.quality[m];
        cpu_sum += entry_cpu_[j];
        rate_sum += entry_rate_[j];
        out.cost += entry_cost_[j];
        if (!entry_latency_ok_[m * c + j])
            out.violations.push_back({Violation::latency, static_cast<int>(m)});
        if (!entry_cost_ok_[m * c + j])
            out.violations.push_back({Violation::cost, static_cast<int>(m)});
    }
    if (cpu_sum > cfg_.constraints.edge_cpu_capacity)
        out.violations.push_back({Violation::edge_cpu, -1});
    if (rate_sum > cfg_.constraints.ran_bandwidth)
        out.violations.push_back({Violation::ran_bandwidth, -1});
    out.feasible = out.violations.empty();

    const double md = static_cast<double>(mcount);
    if (out.feasible) {
        out.utility = utility;
        out.reward_exp3 = utility / md;
        out.reward_dqn = utility / md;
    } else {
        out.utility = 0.0;
        out.reward_exp3 = 0.0;
        out.reward_dqn = -1.0;
    }

    if (cfg_.budget) {
        double dec = 0.0;
        for (size_t m = 0; m < mcount; ++m)
            dec += entry_decrement_[static_cast<size_t>(scratch_entries_[m])];
        dec = std::min(dec, state_.remaining_budget);
        state_.remaining_budget -= dec;
        out.budget_decrement = dec;
        if (state_.remaining_budget < min_decrement_) state_.terminal = true;
    }

    state_.t += 1;
    out.observation = observation();
    return out;
}

void Environment::apply_drift(std::vector<ModelSpec> new_models) {
    if (new_models.size() != state_.models.size())
        throw std::invalid_argument("Environment: drift must keep the model count");
    for (const ModelSpec& m : new_models) validate(m);
    state_.models = std::move(new_models);
    rebuild_tables();
}

bool Environment::is_feasible(int64_t index) const {
    const size_t c = space_.catalog().size();
    decode_scratch(index);
    double cpu_sum = 0.0;
    double rate_sum = 0.0;
    for (size_t m = 0; m < state_.models.size(); ++m) {
        const size_t j = static_cast<size_t>(scratch_entries_[m]);
        if (!entry_latency_ok_[m * c + j] || !entry_cost_ok_[m * c + j]) return false;
        cpu_sum += entry_cpu_[j];
        rate_sum += entry_rate_[j];
    }
    return cpu_sum <= cfg_.constraints.edge_cpu_capacity &&
           rate_sum <= cfg_.constraints.ran_bandwidth;
}

double Environment::mean_quality() const {
    return 0.5 * (cfg_.quality.q_low + cfg_.quality.q_high);
}

double Environment::expected_utility(int64_t index) const {
    if (!is_feasible(index)) return 0.0;
    const size_t c = space_.catalog().size();
    decode_scratch(index);
    double acc_sum = 0.0;
    for (size_t m = 0; m < state_.models.size(); ++m)
        acc_sum += entry_accuracy_[m * c + static_cast<size_t>(scratch_entries_[m])];
    return acc_sum * mean_quality();
}

double Environment::expected_accuracy(int64_t index) const {
    if (!is_feasible(index)) return 0.0;
    const size_t c = space_.catalog().size();
    decode_scratch(index);
    double acc_sum = 0.0;
    for (size_t m = 0; m < state_.models.size(); ++m)
        acc_sum += entry_accuracy_[m * c + static_cast<size_t>(scratch_entries_[m])];
    return acc_sum / static_cast<double>(state_.models.size());
}

double Environment::action_cost(int64_t index) const {
    decode_scratch(index);
    double total = 0.0;
    for (size_t m = 0; m < state_.models.size(); ++m)
        total += entry_cost_[static_cast<size_t>(scratch_entries_[m])];
    return total;
}

double Environment::action_decrement(int64_t index) const {
    decode_scratch(index);
    double total = 0.0;
    for (size_t m = 0; m < state_.models.size(); ++m)
        total += entry_decrement_[static_cast<size_t>(scratch_entries_[m])];
    return total;
}

} // namespace slicesim
