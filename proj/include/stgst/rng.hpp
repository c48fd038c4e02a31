#pragma once

#include <cstdint>
#include <random>

namespace stgst {

// SplitMix64 step; used only to expand seeds into engine state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Engine for substream `stream` of master seed `seed`. Trials indexed this
// way produce identical draws whether executed serially or in parallel.
inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    std::seed_seq seq{static_cast<unsigned>(splitmix64(s) >> 32),
                      static_cast<unsigned>(splitmix64(s)),
                      static_cast<unsigned>(splitmix64(s) >> 32),
                      static_cast<unsigned>(splitmix64(s))};
    return std::mt19937_64(seq);
}

} // namespace stgst
