#pragma once

#include <cstdint>
#include <map>

namespace gelshatter {

/// Cluster-size histogram: counts[s] clusters of size s, monomers included
/// at key 1. Present keys carry counts >= 1 and sizes weighted by counts sum
/// to total_mass.
struct SizeHistogram {
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t total_mass = 0;

    std::uint64_t cluster_count() const {
        std::uint64_t n = 0;
        for (const auto& [size, count] : counts) n += count;
        return n;
    }

    std::uint64_t largest() const {
        return counts.empty() ? 0 : counts.rbegin()->first;
    }

    /// Throws std::invalid_argument on zero counts, zero sizes, or a mass
    /// mismatch.
    void validate() const;
};

}  // namespace gelshatter
