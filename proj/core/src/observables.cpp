#include "gelshatter/observables.hpp"

#include <algorithm>
#include <stdexcept>

namespace gelshatter {

std::uint64_t HeatMap::total() const {
    std::uint64_t n = 0;
    for (auto c : counts) n += c;
    return n;
}

void HeatMap::merge(const HeatMap& other) {
    if (other.bins_x != bins_x || other.bins_y != bins_y)
        throw std::invalid_argument("heatmap: bin shapes differ");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> ccdf(const SizeHistogram& hist) {
    if (hist.counts.empty()) throw std::invalid_argument("ccdf: empty histogram");
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    out.reserve(hist.counts.size());
    std::uint64_t larger = 0;
    for (auto it = hist.counts.rbegin(); it != hist.counts.rend(); ++it) {
        out.emplace_back(it->first, larger);
        larger += it->second;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<std::pair<std::uint64_t, double>> ccdf(
    const std::map<std::uint64_t, double>& density) {
    if (density.empty()) throw std::invalid_argument("ccdf: empty density");
    std::vector<std::pair<std::uint64_t, double>> out;
    out.reserve(density.size());
    double larger = 0.0;
    for (auto it = density.rbegin(); it != density.rend(); ++it) {
        out.emplace_back(it->first, larger);
        larger += it->second;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::map<std::uint64_t, double> mean_cluster_density(std::span<const SizeHistogram> hists) {
    if (hists.empty()) throw std::invalid_argument("mean_cluster_density: no histograms");
    MeanDensityAccumulator acc;
    for (const auto& h : hists) acc.add(h);
    return acc.mean();
}

void MeanDensityAccumulator::add(const SizeHistogram& hist) {
    if (n_ == 0) {
        total_mass_ = hist.total_mass;
    } else if (hist.total_mass != total_mass_) {
        throw std::invalid_argument("mean_cluster_density: mixed total_mass");
    }
    for (const auto& [size, count] : hist.counts) sums_[size] += count;
    ++n_;
}

std::map<std::uint64_t, double> MeanDensityAccumulator::mean() const {
    std::map<std::uint64_t, double> out;
    for (const auto& [size, sum] : sums_)
        out.emplace_hint(out.end(), size,
                         static_cast<double>(sum) / static_cast<double>(n_));
    return out;
}

HeatMap make_heatmap(std::span<const TrajectorySample> samples, std::uint64_t total_mass,
                     std::uint32_t bins_x, std::uint32_t bins_y) {
    if (bins_x < 2 || bins_y < 2) throw std::invalid_argument("heatmap: bins must be >= 2");
    HeatMap map;
    map.bins_x = bins_x;
    map.bins_y = bins_y;
    map.counts.assign(static_cast<std::size_t>(bins_x) * bins_y, 0);
    const double m = static_cast<double>(total_mass);
    for (const auto& s : samples) {
        const double x = static_cast<double>(s.k_max) / m;
        const double y = static_cast<double>(s.n_clusters) / m;
        const auto bx = std::min<std::uint32_t>(
            static_cast<std::uint32_t>(x * bins_x), bins_x - 1);
        const auto by = std::min<std::uint32_t>(
            static_cast<std::uint32_t>(y * bins_y), bins_y - 1);
        ++map.counts[static_cast<std::size_t>(by) * bins_x + bx];
    }
    return map;
}

std::vector<std::uint64_t> recurrence_times(std::span<const ShatterEvent> events) {
    std::vector<std::uint64_t> times;
    std::uint64_t previous = 0;
    bool have_previous = false;
    for (const auto& e : events) {
        if (!e.was_largest) continue;
        if (have_previous) times.push_back(e.step - previous);
        previous = e.step;
        have_previous = true;
    }
    return times;
}

std::vector<std::uint64_t> cycle_peaks(std::span<const ShatterEvent> events) {
    std::vector<std::uint64_t> peaks;
    for (const auto& e : events)
        if (e.was_largest) peaks.push_back(e.size);
    return peaks;
}

double cyclicity(std::span<const std::uint64_t> k_max_series) {
    if (k_max_series.size() < 2)
        throw std::invalid_argument("cyclicity: need a stride-1 series of length >= 2");
    DeltaCounts counts;
    for (std::size_t i = 1; i < k_max_series.size(); ++i) {
        if (k_max_series[i] > k_max_series[i - 1])
            ++counts.up;
        else if (k_max_series[i] < k_max_series[i - 1])
            ++counts.down;
        ++counts.total;
    }
    return cyclicity(counts);
}

double cyclicity(const DeltaCounts& counts) {
    if (counts.total == 0) throw std::invalid_argument("cyclicity: empty step tally");
    return (static_cast<double>(counts.up) - static_cast<double>(counts.down)) /
           static_cast<double>(counts.total);
}

double cyclicity(const DeltaSignLog& signs) {
    if (signs.empty()) throw std::invalid_argument("cyclicity: empty sign log");
    DeltaCounts counts;
    for (std::size_t i = 0; i < signs.size(); ++i) {
        const int s = signs[i];
        if (s > 0)
            ++counts.up;
        else if (s < 0)
            ++counts.down;
        ++counts.total;
    }
    return cyclicity(counts);
}

double cyclicity(const Trajectory& trajectory) {
    // The engine tallies every step, which is the stride-1 accounting the
    // definition requires.
    return cyclicity(trajectory.delta_counts);
}

double cyclicity_from_samples(const Trajectory& trajectory) {
    if (trajectory.config.sample_interval != 1)
        throw std::invalid_argument(
            "cyclicity: samples were recorded at stride != 1; the definition is per-step");
    std::vector<std::uint64_t> series;
    series.reserve(trajectory.samples.size());
    for (const auto& s : trajectory.samples) series.push_back(s.k_max);
    return cyclicity(std::span<const std::uint64_t>(series));
}

}  // namespace gelshatter
