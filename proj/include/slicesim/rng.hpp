#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace slicesim {

// splitmix64 finalizer, used to spread seed material.
uint64_t mix64(uint64_t x);

// FNV-1a over a byte string, used to turn cell names into seed material.
uint64_t fnv1a64(std::string_view s);

// Seed for a named sub-stream of a master seed. Every experiment cell gets
// its own stream so cells can be reordered without changing results.
uint64_t derive_seed(uint64_t master, std::string_view cell);

// mt19937_64 with hand-rolled draw helpers. The standard <random>
// distributions are implementation-defined, which would break byte-exact
// reruns across toolchains, so draws come straight from engine output.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // uniform integer in [0, n), n > 0
    int64_t next_below(int64_t n);

private:
    std::mt19937_64 engine_;
};

} // namespace slicesim
