#pragma once

#include <cstdint>
#include <vector>

#include "slicesim/rng.hpp"

namespace slicesim {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Supervised batch for the action-value head: each sample carries an input,
// the output row its target applies to, and the target value. The loss is the
// mean squared error over the batch, taken only at the named rows.
struct QBatch {
    int64_t size = 0;
    int64_t in_dim = 0;
    std::vector<double> inputs;    // size * in_dim, flat
    std::vector<int64_t> rows;     // output row per sample
    std::vector<double> targets;   // target value per sample
};

// Fully connected network with ReLU hidden layers and an identity output
// layer, trained with Adam on the QBatch loss. Parameters are stored flat per
// layer (weights row-major, then biases); weights and biases initialize
// uniformly in [-1/sqrt(fan_in), +1/sqrt(fan_in)], drawn layer by layer in
// that order from the seed, so a given (dims, seed) pair always produces the
// same network.
//
// Batches routinely repeat the same input (the stationary setting has a
// single observation), so forward and backward work is grouped by distinct
// input: one forward pass and one dense backward pass per group, with the
// per-sample output errors accumulated sparsely into the rows they touch.
class ValueNetwork {
public:
    ValueNetwork(std::vector<int64_t> dims, uint64_t seed);

    // Activations for one input; returns a reference to an internal buffer
    // that the next forward() call overwrites.
    const std::vector<double>& forward(const double* input) const;
    std::vector<double> evaluate(const std::vector<double>& input) const;

    double loss(const QBatch& batch) const;
    std::vector<double> gradient(const QBatch& batch) const;

    // One Adam step on the batch gradient; returns the pre-step loss.
    double train(const QBatch& batch);

    int64_t num_params() const { return num_params_; }
    std::vector<double> flat_params() const;
    void set_flat_params(const std::vector<double>& p);
    void copy_params_from(const ValueNetwork& other);

    // Bumped by every parameter change (train, set_flat_params, copy), so
    // callers can cache per-parameter-state results safely.
    int64_t revision() const { return revision_; }

    const std::vector<int64_t>& dims() const { return dims_; }
    AdamConfig& adam() { return adam_; }
    const AdamConfig& adam() const { return adam_; }
    int64_t adam_steps() const { return adam_t_; }

private:
    // Forward for one input, filling preactivations and activations for every
    // layer into the given scratch. act[0] is the input itself.
    void forward_layers(const double* input, std::vector<std::vector<double>>& act) const;
    void accumulate_gradient(const QBatch& batch, std::vector<double>& grad,
                             double& loss_out) const;

    std::vector<int64_t> dims_;
    int64_t num_params_ = 0;
    std::vector<size_t> weight_off_;  // per layer, into the flat vector
    std::vector<size_t> bias_off_;
    std::vector<double> params_;

    AdamConfig adam_;
    std::vector<double> adam_m_;
    std::vector<double> adam_v_;
    int64_t adam_t_ = 0;
    int64_t revision_ = 0;

    mutable std::vector<std::vector<double>> scratch_act_;
    mutable std::vector<double> scratch_grad_;
};

}  // namespace slicesim
