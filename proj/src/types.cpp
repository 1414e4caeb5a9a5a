#include "slicesim/types.hpp"

#include <stdexcept>

namespace slicesim {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

} // namespace

void validate(const ModelSpec& m) {
    require(!m.id.empty(), "ModelSpec: empty id");
    require(m.dataset_size > 0, "ModelSpec: dataset_size must be positive");
    require(m.sample_size_bits > 0, "ModelSpec: sample_size_bits must be positive");
    require(m.cycles_per_sample > 0, "ModelSpec: cycles_per_sample must be positive");
    require(m.access_delay_s > 0, "ModelSpec: access_delay_s must be positive");
    require(m.latency_kpi_s > 0, "ModelSpec: latency_kpi_s must be positive");
    require(m.latency_kpi_s > m.access_delay_s,
            "ModelSpec: latency_kpi_s must exceed access_delay_s");
    require(m.cost_kpi > 0, "ModelSpec: cost_kpi must be positive");
}

void validate(const ConstraintSet& c) {
    require(c.edge_cpu_capacity > 0, "ConstraintSet: edge_cpu_capacity must be positive");
    require(c.ran_bandwidth > 0, "ConstraintSet: ran_bandwidth must be positive");
    require(c.cpu_unit_price > 0, "ConstraintSet: cpu_unit_price must be positive");
    require(c.rate_unit_price > 0, "ConstraintSet: rate_unit_price must be positive");
}

void validate(const QualityProcess& q) {
    require(q.q_low > 0 && q.q_low <= q.q_high, "QualityProcess: need 0 < q_low <= q_high");
    require(q.q_high <= 1.0, "QualityProcess: q_high must not exceed 1");
    require(q.period >= 1, "QualityProcess: period must be at least 1");
}

void validate(const RwBudgetConfig& b) {
    require(b.initial_budget > 0, "RwBudgetConfig: initial_budget must be positive");
    require(b.read_cost >= 0, "RwBudgetConfig: read_cost must be non-negative");
    require(b.write_cost >= 0, "RwBudgetConfig: write_cost must be non-negative");
    require(b.read_cost + b.write_cost > 0, "RwBudgetConfig: some cost must be positive");
    require(b.data_units_max > 0, "RwBudgetConfig: data_units_max must be positive");
}

void validate(const GridConfig& g) {
    require(!g.data_fractions.empty(), "GridConfig: data_fractions empty");
    require(!g.epoch_levels.empty(), "GridConfig: epoch_levels empty");
    require(!g.cpu_freq_levels.empty(), "GridConfig: cpu_freq_levels empty");
    require(!g.data_rate_levels.empty(), "GridConfig: data_rate_levels empty");
    for (double f : g.data_fractions)
        require(f > 0 && f <= 1.0, "GridConfig: data_fraction outside (0,1]");
    for (int k : g.epoch_levels) require(k > 0, "GridConfig: epochs must be positive");
    for (double f : g.cpu_freq_levels) require(f > 0, "GridConfig: cpu_freq must be positive");
    for (double r : g.data_rate_levels) require(r > 0, "GridConfig: data_rate must be positive");
    require(g.max_epochs > 0, "GridConfig: max_epochs must be positive");
    for (int k : g.epoch_levels)
        require(k <= g.max_epochs, "GridConfig: epoch level exceeds max_epochs");
    require(g.catalog_size >= 0, "GridConfig: catalog_size must be non-negative");
    require(g.hard_cap > 0, "GridConfig: hard_cap must be positive");
}

} // namespace slicesim
