#pragma once

#include <cstdint>
#include <filesystem>

namespace gelshatter::recipes {

/// Time-averaged cluster-size distribution with a fragmentation barrier:
/// CCDF, mean density, MLE exponent, and the median-exponent snapshot.
int reproduce_fig1(const std::filesystem::path& out, std::uint64_t seed, unsigned workers,
                   std::uint64_t median_window = 0);

/// Gel-shatter cycle portrait: (k_max, N) trajectory, the fitted exponent
/// series alpha(t), and k_max against time.
int reproduce_fig2(const std::filesystem::path& out, std::uint64_t seed, unsigned workers);

/// Occupancy heat maps over (k_max/M, N/M) at four (M, F_hat) corners.
int reproduce_fig3(const std::filesystem::path& out, std::uint64_t seed, unsigned workers);

/// Recurrence-time data collapse and cyclicity against r.
int reproduce_fig4(const std::filesystem::path& out, std::uint64_t seed, unsigned workers,
                   bool full);

}  // namespace gelshatter::recipes
