#include "slicesim/replay.hpp"

#include <algorithm>
#include <stdexcept>

namespace slicesim {

ReplayBuffer::ReplayBuffer(int64_t capacity, int64_t obs_dim)
    : capacity_(capacity), obs_dim_(obs_dim) {
    if (capacity <= 0) {
        throw std::invalid_argument("ReplayBuffer: capacity must be positive");
    }
    if (obs_dim <= 0) {
        throw std::invalid_argument("ReplayBuffer: obs_dim must be positive");
    }
    obs_.resize(static_cast<size_t>(capacity * obs_dim));
    next_obs_.resize(static_cast<size_t>(capacity * obs_dim));
    actions_.resize(static_cast<size_t>(capacity));
    rewards_.resize(static_cast<size_t>(capacity));
    terminals_.resize(static_cast<size_t>(capacity));
}

void ReplayBuffer::push(const std::vector<double>& obs, int64_t action,
                        double reward, const std::vector<double>& next_obs,
                        bool terminal) {
    if (static_cast<int64_t>(obs.size()) != obs_dim_ ||
        static_cast<int64_t>(next_obs.size()) != obs_dim_) {
        throw std::invalid_argument("ReplayBuffer::push observation dimension mismatch");
    }
    size_t base = static_cast<size_t>(head_ * obs_dim_);
    std::copy(obs.begin(), obs.end(), obs_.begin() + base);
    std::copy(next_obs.begin(), next_obs.end(), next_obs_.begin() + base);
    actions_[static_cast<size_t>(head_)] = action;
    rewards_[static_cast<size_t>(head_)] = reward;
    terminals_[static_cast<size_t>(head_)] = terminal ? 1 : 0;
    head_ = (head_ + 1) % capacity_;
    size_ = std::min(size_ + 1, capacity_);
}

void ReplayBuffer::sample(int64_t batch, Rng& rng, TransitionBatch& out) const {
    if (size_ == 0) {
        throw std::logic_error("ReplayBuffer::sample on empty buffer");
    }
    if (batch <= 0) {
        throw std::invalid_argument("ReplayBuffer::sample batch must be positive");
    }
    out.size = batch;
    out.obs_dim = obs_dim_;
    out.obs.resize(static_cast<size_t>(batch * obs_dim_));
    out.next_obs.resize(static_cast<size_t>(batch * obs_dim_));
    out.actions.resize(static_cast<size_t>(batch));
    out.rewards.resize(static_cast<size_t>(batch));
    out.terminals.resize(static_cast<size_t>(batch));
    for (int64_t i = 0; i < batch; ++i) {
        int64_t idx = rng.next_below(size_);
        size_t src = static_cast<size_t>(idx * obs_dim_);
        size_t dst = static_cast<size_t>(i * obs_dim_);
        std::copy(obs_.begin() + src, obs_.begin() + src + obs_dim_,
                  out.obs.begin() + dst);
        std::copy(next_obs_.begin() + src, next_obs_.begin() + src + obs_dim_,
                  out.next_obs.begin() + dst);
        out.actions[static_cast<size_t>(i)] = actions_[static_cast<size_t>(idx)];
        out.rewards[static_cast<size_t>(i)] = rewards_[static_cast<size_t>(idx)];
        out.terminals[static_cast<size_t>(i)] = terminals_[static_cast<size_t>(idx)];
    }
}

}  // namespace slicesim
