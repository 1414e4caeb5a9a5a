#pragma once

#include <cstdint>
#include <vector>

#include "slicesim/rng.hpp"

namespace slicesim {

// A batch of transitions laid out flat: observations are concatenated, so
// sample i occupies obs[i * obs_dim .. (i + 1) * obs_dim).
struct TransitionBatch {
    int64_t size = 0;
    int64_t obs_dim = 0;
    std::vector<double> obs;
    std::vector<double> next_obs;
    std::vector<int64_t> actions;
    std::vector<double> rewards;
    std::vector<uint8_t> terminals;
};

// Fixed-capacity uniform replay memory. Once full, the oldest transition is
// overwritten first. Storage is flat arrays rather than a deque of structs so
// that sampling a batch is a handful of contiguous copies.
class ReplayBuffer {
public:
    ReplayBuffer(int64_t capacity, int64_t obs_dim);

    void push(const std::vector<double>& obs, int64_t action, double reward,
              const std::vector<double>& next_obs, bool terminal);

    // Uniformly samples `batch` transitions with replacement into `out`.
    // Throws std::logic_error when the buffer is empty.
    void sample(int64_t batch, Rng& rng, TransitionBatch& out) const;

    int64_t size() const { return size_; }
    int64_t capacity() const { return capacity_; }
    int64_t obs_dim() const { return obs_dim_; }

private:
    int64_t capacity_ = 0;
    int64_t obs_dim_ = 0;
    int64_t size_ = 0;
    int64_t head_ = 0;  // next slot to write
    std::vector<double> obs_;
    std::vector<double> next_obs_;
    std::vector<int64_t> actions_;
    std::vector<double> rewards_;
    std::vector<uint8_t> terminals_;
};

}  // namespace slicesim
