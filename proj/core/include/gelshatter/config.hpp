#pragma once

#include <cstdint>
#include <string>

namespace gelshatter {

enum class InitialCondition { AllMonomers, SingleGel };

std::string to_string(InitialCondition init);
InitialCondition initial_condition_from_string(const std::string& name);

/// Parameters of one stochastic run. `total_mass` monomer units are
/// conserved; clusters merge at rate coalescence_rate*(i/M)*(j/M) per
/// ordered pick and shatter to monomers at rate fragmentation_rate*(i/M),
/// restricted to sizes strictly above frag_threshold.
struct SimulationConfig {
    std::uint64_t total_mass = 0;         // M
    double coalescence_rate = 0.0;        // K_hat
    double fragmentation_rate = 0.0;      // F_hat
    std::uint64_t frag_threshold = 1;     // sizes <= threshold never shatter
    std::uint64_t seed = 0;
    std::uint64_t max_steps = 0;
    std::uint64_t sample_interval = 1;
    bool record_histograms = false;
    bool record_delta_signs = false;
    InitialCondition init = InitialCondition::AllMonomers;

    /// Probability that a step is a coalescence attempt.
    double coalescence_probability() const {
        return coalescence_rate / (coalescence_rate + fragmentation_rate);
    }

    /// Dimensionless ratio of gelation to shattering time scales,
    /// r = F_hat * M / K_hat.
    double timescale_ratio() const {
        return fragmentation_rate * static_cast<double>(total_mass) / coalescence_rate;
    }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

}  // namespace gelshatter
