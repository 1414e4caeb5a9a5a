#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "slicesim/mlp.hpp"
#include "slicesim/replay.hpp"
#include "slicesim/rng.hpp"

namespace slicesim {

struct DqnConfig {
    int64_t num_actions = 0;
    int64_t obs_dim = 1;
    std::vector<int64_t> hidden = {64, 64};
    double discount = 0.90;
    int64_t batch_size = 2048;
    int64_t replay_capacity = 1'000'000;
    double epsilon_start = 1.0;
    double epsilon_decay = 0.99;   // multiplicative, applied per episode
    double epsilon_final = 0.05;
    int64_t target_sync_every = 1000;  // environment transitions between hard syncs
    int64_t train_every = 1;           // environment transitions between updates
    AdamConfig adam;
};

// Bellman backup target: reward plus the discounted best next value, or just
// the reward when the transition ended the episode.
double td_target(double reward, double discount, double max_next_q, bool terminal);

// Value-based learner: epsilon-greedy behavior over a learned Q network,
// uniform replay, and a hard-synced target network for the backup values.
// The caller owns the loop: select() picks an action, observe() records the
// transition (and counts environment steps for target syncing), train_step()
// runs one minibatch update, end_episode() decays epsilon.
class DqnAgent {
public:
    DqnAgent(const DqnConfig& cfg, uint64_t seed);

    int64_t select(const std::vector<double>& obs, Rng& rng);

    // Argmax of the online network at obs, lowest index winning ties. The
    // last answer is memoized per (parameter version, observation).
    int64_t greedy_action(const std::vector<double>& obs) const;

    void observe(const std::vector<double>& obs, int64_t action, double reward,
                 const std::vector<double>& next_obs, bool terminal);

    // One minibatch update; returns the batch loss, or nothing while the
    // replay memory is still smaller than the batch size.
    std::optional<double> train_step(Rng& rng);

    void end_episode();
    void sync_target();

    double epsilon() const { return epsilon_; }
    int64_t env_steps() const { return env_steps_; }
    int64_t train_steps() const { return train_steps_; }
    int64_t num_actions() const { return cfg_.num_actions; }
    const DqnConfig& config() const { return cfg_; }

    std::vector<double> q_values(const std::vector<double>& obs) const;
    std::vector<double> target_q_values(const std::vector<double>& obs) const;
    const ReplayBuffer& replay() const { return replay_; }
    ValueNetwork& online() { return online_; }
    const ValueNetwork& online() const { return online_; }

private:
    DqnConfig cfg_;
    ValueNetwork online_;
    ValueNetwork target_;
    ReplayBuffer replay_;
    double epsilon_ = 1.0;
    int64_t env_steps_ = 0;
    int64_t train_steps_ = 0;

    mutable TransitionBatch sample_scratch_;
    mutable QBatch train_scratch_;
    mutable std::vector<int64_t> order_scratch_;

    mutable int64_t memo_version_ = -1;
    mutable std::vector<double> memo_obs_;
    mutable int64_t memo_action_ = -1;
};

}  // namespace slicesim
