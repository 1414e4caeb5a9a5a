#include "slicesim/exp3.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slicesim {

namespace {

// Rebuild once any shifted exponent exceeds this; exp(50) ~ 5e21 still leaves
// plenty of headroom in a double while keeping small weights representable.
constexpr double kMaxShiftedExponent = 50.0;
constexpr int64_t kRebuildInterval = 1 << 20;

}  // namespace

Exp3Agent::Exp3Agent(int64_t num_actions, double gamma)
    : k_(num_actions), gamma_(gamma) {
    if (num_actions <= 0) {
        throw std::invalid_argument("Exp3Agent: num_actions must be positive");
    }
    if (!(gamma > 0.0) || !(gamma <= 1.0)) {
        throw std::invalid_argument("Exp3Agent: gamma must be in (0, 1]");
    }
    log_w_.assign(static_cast<size_t>(k_), 0.0);
    rebuild_tree();
}

void Exp3Agent::tree_add(int64_t i, double delta) {
    for (int64_t j = i + 1; j <= k_; j += j & -j) {
        tree_[static_cast<size_t>(j)] += delta;
    }
}

double Exp3Agent::tree_prefix(int64_t i) const {
    double s = 0.0;
    for (int64_t j = i + 1; j > 0; j -= j & -j) {
        s += tree_[static_cast<size_t>(j)];
    }
    return s;
}

int64_t Exp3Agent::tree_find(double target) const {
    // Smallest index whose prefix sum exceeds target.
    int64_t pos = 0;
    int64_t mask = 1;
    while ((mask << 1) <= k_) mask <<= 1;
    double rem = target;
    for (; mask > 0; mask >>= 1) {
        int64_t next = pos + mask;
        if (next <= k_ && tree_[static_cast<size_t>(next)] <= rem) {
            rem -= tree_[static_cast<size_t>(next)];
            pos = next;
        }
    }
    return std::min<int64_t>(pos, k_ - 1);  // pos is the count of entries before the hit
}

double Exp3Agent::shifted_weight(int64_t i) const {
    return std::exp(log_w_[static_cast<size_t>(i)] - offset_);
}

void Exp3Agent::rebuild_tree() {
    offset_ = *std::max_element(log_w_.begin(), log_w_.end());
    tree_.assign(static_cast<size_t>(k_) + 1, 0.0);
    total_ = 0.0;
    for (int64_t i = 0; i < k_; ++i) {
        double w = shifted_weight(i);
        tree_add(i, w);
        total_ += w;
    }
    updates_since_rebuild_ = 0;
}

int64_t Exp3Agent::select(Rng& rng) {
    int64_t arm;
    if (rng.next_double() < gamma_) {
        arm = rng.next_below(k_);
    } else {
        double target = rng.next_double() * total_;
        arm = tree_find(target);
    }
    last_selected_ = arm;
    last_p_selected_ = probability(arm);
    return arm;
}

void Exp3Agent::update(int64_t chosen, double reward) {
    if (last_selected_ < 0) {
        throw std::logic_error("Exp3Agent::update called without a pending select");
    }
    if (chosen != last_selected_) {
        throw std::logic_error("Exp3Agent::update arm does not match the last select");
    }
    if (!(reward >= 0.0 && reward <= 1.0)) {
        throw std::invalid_argument("Exp3Agent::update reward must be in [0, 1]");
    }

    double x_hat = reward / last_p_selected_;
    double old_shifted = shifted_weight(chosen);
    log_w_[static_cast<size_t>(chosen)] += gamma_ * x_hat / static_cast<double>(k_);
    ++updates_;
    ++updates_since_rebuild_;
    last_selected_ = -1;
    last_p_selected_ = 0.0;

    if (log_w_[static_cast<size_t>(chosen)] - offset_ > kMaxShiftedExponent ||
        updates_since_rebuild_ >= kRebuildInterval) {
        rebuild_tree();
        return;
    }
    double new_shifted = shifted_weight(chosen);
    tree_add(chosen, new_shifted - old_shifted);
    total_ += new_shifted - old_shifted;
}

double Exp3Agent::probability(int64_t i) const {
    if (i < 0 || i >= k_) {
        throw std::out_of_range("Exp3Agent::probability index out of range");
    }
    return (1.0 - gamma_) * shifted_weight(i) / total_ + gamma_ / static_cast<double>(k_);
}

std::vector<double> Exp3Agent::probabilities() const {
    std::vector<double> p(static_cast<size_t>(k_));
    double sum = 0.0;
    for (int64_t i = 0; i < k_; ++i) {
        p[static_cast<size_t>(i)] = shifted_weight(i);
        sum += p[static_cast<size_t>(i)];
    }
    double uniform = gamma_ / static_cast<double>(k_);
    for (int64_t i = 0; i < k_; ++i) {
        p[static_cast<size_t>(i)] = (1.0 - gamma_) * p[static_cast<size_t>(i)] / sum + uniform;
    }
    return p;
}

int64_t Exp3Agent::greedy_action() const {
    int64_t best = 0;
    for (int64_t i = 1; i < k_; ++i) {
        if (log_w_[static_cast<size_t>(i)] > log_w_[static_cast<size_t>(best)]) {
            best = i;
        }
    }
    return best;
}

void Exp3Agent::set_log_weights(const std::vector<double>& log_w) {
    if (static_cast<int64_t>(log_w.size()) != k_) {
        throw std::invalid_argument("Exp3Agent::set_log_weights size mismatch");
    }
    log_w_ = log_w;
    last_selected_ = -1;
    last_p_selected_ = 0.0;
    rebuild_tree();
}

double Exp3Agent::policy_entropy() const {
    std::vector<double> p = probabilities();
    double h = 0.0;
    for (double pi : p) {
        if (pi > 0.0) h -= pi * std::log(pi);
    }
    return h;
}

}  // namespace slicesim
