#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slicesim/accuracy.hpp"

namespace slicesim {

// One tenant model training at the edge: its learning curve plus the
// constants that drive latency, cost and budget accounting.
struct ModelSpec {
    std::string id;
    AccuracyModel accuracy;
    double dataset_size;       // training samples available
    double sample_size_bits;   // payload per sample
    double cycles_per_sample;  // CPU work per sample per epoch
    double access_delay_s;     // fixed network access latency
    double latency_kpi_s;      // per-step training deadline
    double cost_kpi;           // per-step spend ceiling
};

void validate(const ModelSpec& m);

// Per-model resource slice for one step.
struct SliceVector {
    double data_fraction;  // (0, 1]
    int epochs;
    double cpu_freq;   // Hz
    double data_rate;  // bit/s
};

// Joint action: one slice per model plus its index in the enumerated space.
struct JointAction {
    int64_t index = -1;
    std::vector<SliceVector> slices;
};

// Shared edge resources and unit prices.
struct ConstraintSet {
    double edge_cpu_capacity;  // Hz, shared across models
    double ran_bandwidth;      // bit/s, shared across models
    double cpu_unit_price;     // currency per Hz per step
    double rate_unit_price;    // currency per bit/s per step
};

void validate(const ConstraintSet& c);

enum class QualityMode { stationary, adversary };

// Per-step data-quality multipliers. Stationary: iid uniform in
// [q_low, q_high] per model. Adversary: deterministic toggle shared by all
// models, q_high while floor(t/period) is even and q_low otherwise.
struct QualityProcess {
    QualityMode mode = QualityMode::stationary;
    double q_low = 0.8;
    double q_high = 1.0;
    int period = 3;  // adversary toggle half-period in steps
};

void validate(const QualityProcess& q);

// Read/write budget drained by training activity.
struct RwBudgetConfig {
    double initial_budget = 500.0;
    double read_cost = 0.2;       // per epoch
    double write_cost = 0.5;      // per data unit written
    double data_units_max = 8.0;  // data units moved at data_fraction = 1
};

void validate(const RwBudgetConfig& b);

// Grid levels from which per-model slice catalogs are enumerated.
struct GridConfig {
    std::vector<double> data_fractions;
    std::vector<int> epoch_levels;
    std::vector<double> cpu_freq_levels;   // Hz
    std::vector<double> data_rate_levels;  // bit/s
    int max_epochs = 20;  // effort normalization
    // entries kept per model; 0 keeps the full grid product
    int catalog_size = 0;
    // refuse to enumerate joint spaces larger than this
    int64_t hard_cap = 1'000'000;
};

void validate(const GridConfig& g);

} // namespace slicesim
