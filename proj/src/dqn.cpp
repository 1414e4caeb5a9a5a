#include "slicesim/dqn.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace slicesim {

double td_target(double reward, double discount, double max_next_q, bool terminal) {
    return terminal ? reward : reward + discount * max_next_q;
}

namespace {

std::vector<int64_t> network_dims(const DqnConfig& cfg) {
    std::vector<int64_t> dims;
    dims.push_back(cfg.obs_dim);
    dims.insert(dims.end(), cfg.hidden.begin(), cfg.hidden.end());
    dims.push_back(cfg.num_actions);
    return dims;
}

int64_t argmax_lowest(const std::vector<double>& v) {
    int64_t best = 0;
    for (int64_t i = 1; i < static_cast<int64_t>(v.size()); ++i) {
        if (v[static_cast<size_t>(i)] > v[static_cast<size_t>(best)]) best = i;
    }
    return best;
}

}  // namespace

DqnAgent::DqnAgent(const DqnConfig& cfg, uint64_t seed)
    : cfg_(cfg),
      online_(network_dims(cfg), mix64(seed ^ 0x9e3779b97f4a7c15ull)),
      target_(network_dims(cfg), mix64(seed ^ 0x9e3779b97f4a7c15ull)),
      replay_(cfg.replay_capacity, cfg.obs_dim),
      epsilon_(cfg.epsilon_start) {
    if (cfg.num_actions <= 0) {
        throw std::invalid_argument("DqnAgent: num_actions must be positive");
    }
    if (cfg.batch_size <= 0 || cfg.batch_size > cfg.replay_capacity) {
        throw std::invalid_argument("DqnAgent: batch_size must be in [1, replay_capacity]");
    }
    if (cfg.train_every <= 0) {
        throw std::invalid_argument("DqnAgent: train_every must be positive");
    }
    if (!(cfg.discount >= 0.0 && cfg.discount < 1.0)) {
        throw std::invalid_argument("DqnAgent: discount must be in [0, 1)");
    }
    online_.adam() = cfg.adam;
    target_.copy_params_from(online_);
}

int64_t DqnAgent::select(const std::vector<double>& obs, Rng& rng) {
    if (rng.next_double() < epsilon_) {
        return rng.next_below(cfg_.num_actions);
    }
    return greedy_action(obs);
}

int64_t DqnAgent::greedy_action(const std::vector<double>& obs) const {
    if (memo_version_ == online_.revision() && memo_obs_ == obs) {
        return memo_action_;
    }
    const std::vector<double>& q = online_.forward(obs.data());
    int64_t best = argmax_lowest(q);
    memo_version_ = online_.revision();
    memo_obs_ = obs;
    memo_action_ = best;
    return best;
}

void DqnAgent::observe(const std::vector<double>& obs, int64_t action, double reward,
                       const std::vector<double>& next_obs, bool terminal) {
    replay_.push(obs, action, reward, next_obs, terminal);
    ++env_steps_;
    if (cfg_.target_sync_every > 0 && env_steps_ % cfg_.target_sync_every == 0) {
        sync_target();
    }
}

std::optional<double> DqnAgent::train_step(Rng& rng) {
    if (replay_.size() < cfg_.batch_size) {
        return std::nullopt;
    }
    replay_.sample(cfg_.batch_size, rng, sample_scratch_);
    const TransitionBatch& b = sample_scratch_;

    QBatch& qb = train_scratch_;
    qb.size = b.size;
    qb.in_dim = b.obs_dim;
    qb.inputs = b.obs;
    qb.rows = b.actions;
    qb.targets.resize(static_cast<size_t>(b.size));

    // Target values, one target-network forward per distinct next state.
    std::vector<int64_t>& order = order_scratch_;
    order.resize(static_cast<size_t>(b.size));
    std::iota(order.begin(), order.end(), 0);
    const double* nx = b.next_obs.data();
    int64_t d = b.obs_dim;
    std::stable_sort(order.begin(), order.end(), [&](int64_t a, int64_t c) {
        return std::lexicographical_compare(nx + a * d, nx + (a + 1) * d,
                                            nx + c * d, nx + (c + 1) * d);
    });
    size_t g = 0;
    while (g < order.size()) {
        size_t end = g + 1;
        while (end < order.size() &&
               std::equal(nx + order[g] * d, nx + (order[g] + 1) * d,
                          nx + order[end] * d)) {
            ++end;
        }
        const std::vector<double>& q = target_.forward(nx + order[g] * d);
        double max_q = *std::max_element(q.begin(), q.end());
        for (size_t s = g; s < end; ++s) {
            size_t i = static_cast<size_t>(order[s]);
            qb.targets[i] = td_target(b.rewards[i], cfg_.discount, max_q,
                                      b.terminals[i] != 0);
        }
        g = end;
    }

    double loss = online_.train(qb);
    ++train_steps_;
    return loss;
}

void DqnAgent::end_episode() {
    epsilon_ = std::max(cfg_.epsilon_final, epsilon_ * cfg_.epsilon_decay);
}

void DqnAgent::sync_target() {
    target_.copy_params_from(online_);
}

std::vector<double> DqnAgent::q_values(const std::vector<double>& obs) const {
    return online_.evaluate(obs);
}

std::vector<double> DqnAgent::target_q_values(const std::vector<double>& obs) const {
    return target_.evaluate(obs);
}

}  // namespace slicesim
