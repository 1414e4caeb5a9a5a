#pragma once

#include <cstdint>
#include <vector>

#include "slicesim/types.hpp"

namespace slicesim {

// Deterministic enumeration of the joint action space. Each model draws from
// the same catalog: the full grid product (data_fraction outermost, then
// epochs, cpu, rate) optionally pruned to catalog_size entries picked by a
// coprime stride so every grid dimension stays represented. A joint action is
// a mixed-radix digit string over catalog positions, model 0 most
// significant, so index <-> action is a bijection by construction.
class ActionSpace {
public:
    static ActionSpace build(const GridConfig& grid, int num_models);

    int64_t size() const { return size_; }
    int num_models() const { return num_models_; }
    int max_epochs() const { return max_epochs_; }
    const std::vector<SliceVector>& catalog() const { return catalog_; }

    // index -> per-model catalog positions (out must have num_models slots)
    void decode_entries(int64_t index, int* out) const;
    int64_t encode_entries(const int* entries) const;

    JointAction decode(int64_t index) const;
    // inverse of decode; requires exact slice values from the catalog
    int64_t encode(const JointAction& action) const;

private:
    std::vector<SliceVector> catalog_;
    int num_models_ = 0;
    int64_t size_ = 0;
    int max_epochs_ = 20;
};

} // namespace slicesim
