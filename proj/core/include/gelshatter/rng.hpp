#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

namespace gelshatter {

// mt19937_64 has a standard-mandated state layout and stream, so results
// are reproducible across compilers and platforms.
using RandomEngine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ splitmix64(b + 0x9e3779b97f4a7c15ULL));
}

/// Child seed for replica `replica` of grid point `point`. Order-independent:
/// the pair fully determines the seed regardless of execution schedule.
inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t point,
                                std::uint64_t replica = 0) {
    return mix64(mix64(master, point + 1), replica + 1);
}

inline RandomEngine make_engine(std::uint64_t seed) {
    return RandomEngine(splitmix64(seed));
}

/// Unbiased uniform draw in [0, bound) via multiply-and-reject.
inline std::uint64_t uniform_below(RandomEngine& rng, std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(rng()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(RandomEngine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::string engine_state_string(const RandomEngine& rng) {
    std::ostringstream os;
    os << rng;
    return os.str();
}

inline RandomEngine engine_from_state(const std::string& state) {
    RandomEngine rng;
    std::istringstream is(state);
    is >> rng;
    return rng;
}

inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace gelshatter
