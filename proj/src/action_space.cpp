#include "slicesim/action_space.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace slicesim {

namespace {

int64_t gcd64(int64_t a, int64_t b) {
    while (b != 0) {
        const int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Indices of the catalog entries kept out of a full product of n, spread
// across the enumeration by a stride coprime to n and returned in grid order.
std::vector<int64_t> strided_subset(int64_t n, int64_t count) {
    std::vector<int64_t> picked;
    picked.reserve(count);
    if (count >= n) {
        picked.resize(n);
        std::iota(picked.begin(), picked.end(), 0);
        return picked;
    }
    int64_t stride = static_cast<int64_t>(0.618 * static_cast<double>(n));
    if (stride < 1) stride = 1;
    while (gcd64(stride, n) != 1) ++stride;
    for (int64_t j = 0; j < count; ++j) picked.push_back((j * stride) % n);
    std::sort(picked.begin(), picked.end());
    return picked;
}

} // namespace

ActionSpace ActionSpace::build(const GridConfig& grid, int num_models) {
    validate(grid);
    if (num_models < 1) throw std::invalid_argument("ActionSpace: need at least one model");

    const int64_t n_df = static_cast<int64_t>(grid.data_fractions.size());
    const int64_t n_ep = static_cast<int64_t>(grid.epoch_levels.size());
    const int64_t n_f = static_cast<int64_t>(grid.cpu_freq_levels.size());
    const int64_t n_r = static_cast<int64_t>(grid.data_rate_levels.size());
    const int64_t full = n_df * n_ep * n_f * n_r;

    const int64_t keep = grid.catalog_size == 0
                             ? full
                             : std::min<int64_t>(grid.catalog_size, full);

    ActionSpace space;
    space.num_models_ = num_models;
    space.max_epochs_ = grid.max_epochs;
    space.catalog_.reserve(keep);
    for (int64_t idx : strided_subset(full, keep)) {
        const int64_t i_r = idx % n_r;
        const int64_t i_f = (idx / n_r) % n_f;
        const int64_t i_ep = (idx / (n_r * n_f)) % n_ep;
        const int64_t i_df = idx / (n_r * n_f * n_ep);
        space.catalog_.push_back(SliceVector{
            grid.data_fractions[static_cast<size_t>(i_df)],
            grid.epoch_levels[static_cast<size_t>(i_ep)],
            grid.cpu_freq_levels[static_cast<size_t>(i_f)],
            grid.data_rate_levels[static_cast<size_t>(i_r)],
        });
    }

    int64_t size = 1;
    for (int m = 0; m < num_models; ++m) {
        if (size > grid.hard_cap / keep) {
            throw std::length_error(
                "ActionSpace: joint space exceeds hard cap of " +
                std::to_string(grid.hard_cap) + " actions");
        }
        size *= keep;
    }
    space.size_ = size;
    return space;
}

void ActionSpace::decode_entries(int64_t index, int* out) const {
    if (index < 0 || index >= size_)
        throw std::out_of_range("ActionSpace: index " + std::to_string(index) +
                                " outside [0, " + std::to_string(size_) + ")");
    const int64_t c = static_cast<int64_t>(catalog_.size());
    for (int m = num_models_ - 1; m >= 0; --m) {
        out[m] = static_cast<int>(index % c);
        index /= c;
    }
}

int64_t ActionSpace::encode_entries(const int* entries) const {
    const int64_t c = static_cast<int64_t>(catalog_.size());
    int64_t index = 0;
    for (int m = 0; m < num_models_; ++m) {
        if (entries[m] < 0 || entries[m] >= c)
            throw std::out_of_range("ActionSpace: catalog position out of range");
        index = index * c + entries[m];
    }
    return index;
}

JointAction ActionSpace::decode(int64_t index) const {
    std::vector<int> entries(static_cast<size_t>(num_models_));
    decode_entries(index, entries.data());
    JointAction a;
    a.index = index;
    a.slices.reserve(static_cast<size_t>(num_models_));
    for (int m = 0; m < num_models_; ++m)
        a.slices.push_back(catalog_[static_cast<size_t>(entries[m])]);
    return a;
}

int64_t ActionSpace::encode(const JointAction& action) const {
    if (static_cast<int>(action.slices.size()) != num_models_)
        throw std::invalid_argument("ActionSpace: slice count does not match model count");
    std::vector<int> entries(static_cast<size_t>(num_models_));
    for (int m = 0; m < num_models_; ++m) {
        const SliceVector& s = action.slices[static_cast<size_t>(m)];
        int found = -1;
        for (size_t j = 0; j < catalog_.size(); ++j) {
            const SliceVector& c = catalog_[j];
            if (c.data_fraction == s.data_fraction && c.epochs == s.epochs &&
                c.cpu_freq == s.cpu_freq && c.data_rate == s.data_rate) {
                found = static_cast<int>(j);
                break;
            }
        }
        if (found < 0)
            throw std::invalid_argument("ActionSpace: slice not present in catalog");
        entries[static_cast<size_t>(m)] = found;
    }
    return encode_entries(entries.data());
}

} // namespace slicesim
