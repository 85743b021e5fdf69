#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dcc {

/// Seed for a reproducible random stream. Same seed and inputs give identical sampling.
struct rng_seed {
    std::uint64_t value{0};

    bool operator==(const rng_seed &) const = default;
};

using rng_engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent child stream keyed by `tags`. Used so that per-member and
/// per-cell streams do not depend on execution order.
inline rng_seed derive(rng_seed parent, std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t h = splitmix64(parent.value);
    for (const auto t : tags) {
        h = splitmix64(h ^ splitmix64(t + 0x632be59bd9b4e019ULL));
    }
    return rng_seed{h};
}

inline rng_engine make_engine(rng_seed seed) { return rng_engine{seed.value}; }

}  // namespace dcc
