#include "slicesim/rng.hpp"

#include <stdexcept>

namespace slicesim {

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t derive_seed(uint64_t master, std::string_view cell) {
    return mix64(master ^ fnv1a64(cell));
}

int64_t Rng::next_below(int64_t n) {
    if (n <= 0) throw std::invalid_argument("Rng::next_below: n must be positive");
    // multiply-shift map of a 64-bit draw onto [0, n)
    const unsigned __int128 m =
        static_cast<unsigned __int128>(engine_()) * static_cast<unsigned __int128>(n);
    return static_cast<int64_t>(m >> 64);
}

} // namespace slicesim
