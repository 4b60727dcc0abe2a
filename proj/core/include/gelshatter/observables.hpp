#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "gelshatter/engine.hpp"
#include "gelshatter/histogram.hpp"

namespace gelshatter {

/// Occupancy tallies over the unit square (k_max/M, N/M).
struct HeatMap {
    std::uint32_t bins_x = 0;  // k_max / M axis
    std::uint32_t bins_y = 0;  // N / M axis
    std::vector<std::uint64_t> counts;  // row-major, y * bins_x + x

    std::uint64_t at(std::uint32_t x, std::uint32_t y) const {
        return counts[static_cast<std::size_t>(y) * bins_x + x];
    }
    bool visited(std::uint32_t x, std::uint32_t y) const { return at(x, y) > 0; }
    std::uint64_t total() const;

    void merge(const HeatMap& other);
};

/// Number of clusters strictly larger than each present size;
/// non-increasing, zero at the largest present size.
std::vector<std::pair<std::uint64_t, std::uint64_t>> ccdf(const SizeHistogram& hist);

/// CCDF of a real-valued (e.g. time-averaged) size density.
std::vector<std::pair<std::uint64_t, double>> ccdf(
    const std::map<std::uint64_t, double>& density);

/// Per-size arithmetic mean of counts over histograms of equal total mass;
/// absent sizes count as zero.
std::map<std::uint64_t, double> mean_cluster_density(std::span<const SizeHistogram> hists);

/// Streaming equivalent of mean_cluster_density for long runs.
class MeanDensityAccumulator {
public:
    void add(const SizeHistogram& hist);
    std::map<std::uint64_t, double> mean() const;
    std::uint64_t count() const { return n_; }
    std::uint64_t total_mass() const { return total_mass_; }

private:
    std::map<std::uint64_t, std::uint64_t> sums_;
    std::uint64_t n_ = 0;
    std::uint64_t total_mass_ = 0;
};

/// Tallies samples into bins over (k_max/M, N/M); coordinate 1.0 lands in the
/// last bin.
HeatMap make_heatmap(std::span<const TrajectorySample> samples, std::uint64_t total_mass,
                     std::uint32_t bins_x, std::uint32_t bins_y);

/// Steps between successive shatterings of the largest cluster. The interval
/// from the start of the run to the first qualifying event is excluded;
/// fewer than two qualifying events yield an empty sequence.
std::vector<std::uint64_t> recurrence_times(std::span<const ShatterEvent> events);

/// Sizes of the shattered largest clusters, i.e. the peak k_max of each cycle
/// (k_max is non-decreasing between largest-cluster shatterings).
std::vector<std::uint64_t> cycle_peaks(std::span<const ShatterEvent> events);

/// Cyclicity order parameter: (steps growing k_max - steps shrinking k_max)
/// / total steps, in [-1, 1]. Zero-change steps count only in the
/// denominator.
double cyclicity(std::span<const std::uint64_t> k_max_series);
double cyclicity(const DeltaCounts& counts);
double cyclicity(const DeltaSignLog& signs);

/// Cyclicity of a trajectory from the engine's per-step tallies.
double cyclicity(const Trajectory& trajectory);

/// Cyclicity recomputed from recorded samples; rejects recordings with
/// sample_interval != 1.
double cyclicity_from_samples(const Trajectory& trajectory);

}  // namespace gelshatter
