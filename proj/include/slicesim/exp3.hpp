#pragma once

#include <cstdint>
#include <vector>

#include "slicesim/rng.hpp"

namespace slicesim {

// Adversarial bandit with exponential weights and explicit exploration.
//
// Weights are kept in log domain so that very long runs (1e8 pulls) cannot
// overflow; sampling and the weight update go through a Fenwick tree over the
// shifted weights exp(log_w[i] - offset), which makes both select() and
// update() O(log K). The tree is rebuilt from the log weights whenever the
// exponent spread grows too large and periodically to flush accumulated
// floating-point drift.
//
// Rewards must lie in [0, 1]. The importance-weighted estimate for the chosen
// arm is x_hat = r / p_chosen and the update is
//   log_w[chosen] += gamma * x_hat / K.
class Exp3Agent {
public:
    Exp3Agent(int64_t num_actions, double gamma);

    // Samples an arm: with probability gamma uniformly, otherwise in
    // proportion to the weights. Caches the chosen arm and its probability
    // for the matching update() call.
    int64_t select(Rng& rng);

    // Applies the reward for the arm returned by the latest select().
    // Throws std::logic_error when no selection is pending or the arm does
    // not match, std::invalid_argument when the reward is outside [0, 1].
    void update(int64_t chosen, double reward);

    // Probability that select() would pick arm i, i.e.
    // (1 - gamma) * w_i / sum_w + gamma / K.
    double probability(int64_t i) const;
    std::vector<double> probabilities() const;

    // Highest-weight arm, lowest index winning ties.
    int64_t greedy_action() const;

    // Shannon entropy (nats) of the selection distribution.
    double policy_entropy() const;

    int64_t num_actions() const { return k_; }
    double gamma() const { return gamma_; }
    int64_t updates() const { return updates_; }
    const std::vector<double>& log_weights() const { return log_w_; }

    // Replaces the whole weight vector (log domain) and rebuilds the
    // sampling tree. Discards any pending selection.
    void set_log_weights(const std::vector<double>& log_w);

private:
    // Fenwick tree primitives over shifted weights, 1-indexed internally.
    void tree_add(int64_t i, double delta);
    double tree_prefix(int64_t i) const;
    int64_t tree_find(double target) const;
    void rebuild_tree();

    double shifted_weight(int64_t i) const;

    int64_t k_ = 0;
    double gamma_ = 0.0;
    std::vector<double> log_w_;
    std::vector<double> tree_;
    double offset_ = 0.0;     // exponent shift applied to every weight
    double total_ = 0.0;      // tree-tracked sum of shifted weights
    int64_t updates_ = 0;
    int64_t updates_since_rebuild_ = 0;

    int64_t last_selected_ = -1;
    double last_p_selected_ = 0.0;
};

}  // namespace slicesim
