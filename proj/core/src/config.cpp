#include "gelshatter/config.hpp"

#include <stdexcept>

namespace gelshatter {

std::string to_string(InitialCondition init) {
    switch (init) {
        case InitialCondition::AllMonomers: return "monomers";
        case InitialCondition::SingleGel: return "single-gel";
    }
    return "monomers";
}

InitialCondition initial_condition_from_string(const std::string& name) {
    if (name == "monomers") return InitialCondition::AllMonomers;
    if (name == "single-gel") return InitialCondition::SingleGel;
    throw std::invalid_argument("init: unknown initial condition '" + name +
                                "' (expected 'monomers' or 'single-gel')");
}

void SimulationConfig::validate() const {
    if (total_mass < 2)
        throw std::invalid_argument("total_mass: must be >= 2");
    if (coalescence_rate < 0.0)
        throw std::invalid_argument("coalescence_rate: must be >= 0");
    if (fragmentation_rate < 0.0)
        throw std::invalid_argument("fragmentation_rate: must be >= 0");
    if (coalescence_rate + fragmentation_rate <= 0.0)
        throw std::invalid_argument("coalescence_rate: K_hat + F_hat must be > 0");
    if (frag_threshold < 1 || frag_threshold > total_mass)
        throw std::invalid_argument("frag_threshold: must lie in [1, total_mass]");
    if (max_steps == 0)
        throw std::invalid_argument("max_steps: must be >= 1");
    if (sample_interval == 0)
        throw std::invalid_argument("sample_interval: must be >= 1");
}

}  // namespace gelshatter
