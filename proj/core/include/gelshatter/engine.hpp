#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gelshatter/config.hpp"
#include "gelshatter/population.hpp"

namespace gelshatter {

struct TrajectorySample {
    std::uint64_t step = 0;
    std::uint64_t n_clusters = 0;  // N
    std::uint64_t k_max = 0;

    bool operator==(const TrajectorySample&) const = default;
};

struct ShatterEvent {
    std::uint64_t step = 0;
    std::uint64_t size = 0;
    bool was_largest = false;  // size equalled k_max just before the event

    bool operator==(const ShatterEvent&) const = default;
};

/// Per-step sign of the change in k_max, packed two bits per step.
class DeltaSignLog {
public:
    void push(int sign) {
        const std::uint64_t code = sign > 0 ? 1u : (sign < 0 ? 2u : 0u);
        const std::size_t word = n_ / 32, shift = 2 * (n_ % 32);
        if (word == words_.size()) words_.push_back(0);
        words_[word] |= code << shift;
        ++n_;
    }

    int operator[](std::size_t i) const {
        const std::uint64_t code = (words_[i / 32] >> (2 * (i % 32))) & 3u;
        return code == 1 ? 1 : (code == 2 ? -1 : 0);
    }

    std::size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }

private:
    std::vector<std::uint64_t> words_;
    std::size_t n_ = 0;
};

struct DeltaCounts {
    std::uint64_t up = 0;
    std::uint64_t down = 0;
    std::uint64_t total = 0;

    DeltaCounts& operator+=(const DeltaCounts& o) {
        up += o.up;
        down += o.down;
        total += o.total;
        return *this;
    }
};

struct Trajectory {
    SimulationConfig config;
    std::vector<TrajectorySample> samples;
    std::vector<SizeHistogram> sample_histograms;  // parallel to samples when recorded
    std::vector<ShatterEvent> shatter_events;
    DeltaCounts delta_counts;
    DeltaSignLog delta_signs;  // filled only when config.record_delta_signs
    std::uint64_t coalescence_attempts = 0;
    std::uint64_t fragmentation_attempts = 0;
    std::uint64_t final_step = 0;
    SizeHistogram final_state;
    std::string final_rng_state;
    std::uint64_t rng_fingerprint = 0;

    const TrajectorySample& final_sample() const { return samples.back(); }
};

/// Complete state for exact resumption: the size histogram is the full
/// dynamical state of the population and the engine stream is a pure
/// function of (histogram, rng state).
struct Checkpoint {
    SimulationConfig config;
    std::uint64_t step = 0;
    SizeHistogram state;
    std::string rng_state;
};

/// One computational step: a coalescence attempt with probability
/// K_hat/(K_hat+F_hat), otherwise a fragmentation attempt. Coalescence draws
/// two independent size-biased node picks and merges distinct entries;
/// fragmentation draws one pick and shatters a stored cluster of size above
/// frag_threshold. All degenerate draws are NoOp and still consume a step.
EventOutcome step(ClusterPopulation& pop, const SimulationConfig& cfg, RandomEngine& rng);

/// Runs max_steps steps from the configured initial condition, recording a
/// sample every sample_interval steps and every shatter event. Deterministic:
/// identical (config, seed) give bit-identical trajectories.
Trajectory run(const SimulationConfig& cfg);

/// Continues a checkpointed run for additional_steps further steps. The
/// continuation is bit-identical to the uninterrupted run.
Trajectory run_from(const Checkpoint& checkpoint, std::uint64_t additional_steps);

Checkpoint make_checkpoint(const Trajectory& trajectory);

/// Independent replicas with child seeds derived from (cfg.seed, replica).
/// Results are ordered by replica index and do not depend on `workers`.
std::vector<Trajectory> run_ensemble(const SimulationConfig& cfg, unsigned replicas,
                                     unsigned workers = 1);

}  // namespace gelshatter
