#include "gelshatter/engine.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "gelshatter/parallel.hpp"

namespace gelshatter {

namespace {

// Event-type split as a 64-bit threshold so the hot loop stays integer-only.
struct EventSplit {
    bool always_coalesce = false;
    bool always_fragment = false;
    std::uint64_t coalesce_cut = 0;

    static EventSplit from(const SimulationConfig& cfg) {
        EventSplit split;
        if (cfg.fragmentation_rate == 0.0) {
            split.always_coalesce = true;
        } else if (cfg.coalescence_rate == 0.0) {
            split.always_fragment = true;
        } else {
            const long double p = static_cast<long double>(cfg.coalescence_rate) /
                                  (static_cast<long double>(cfg.coalescence_rate) +
                                   static_cast<long double>(cfg.fragmentation_rate));
            split.coalesce_cut =
                static_cast<std::uint64_t>(p * 18446744073709551616.0L);
        }
        return split;
    }

    bool coalesce(RandomEngine& rng) const {
        if (always_coalesce) return true;
        if (always_fragment) return false;
        return rng() < coalesce_cut;
    }
};

EventOutcome step_impl(ClusterPopulation& pop, const EventSplit& split,
                       std::uint64_t frag_threshold, RandomEngine& rng,
                       bool& was_coalescence_attempt) {
    const std::uint64_t mass = pop.total_mass();
    if ((was_coalescence_attempt = split.coalesce(rng))) {
        const auto a = pop.entry_at_node(uniform_below(rng, mass));
        const auto b = pop.entry_at_node(uniform_below(rng, mass));
        return pop.merge_entries(a, b);
    }
    const auto a = pop.entry_at_node(uniform_below(rng, mass));
    if (a.size <= frag_threshold) return EventOutcome::noop();
    return pop.shatter_entry(a);
}

ClusterPopulation initial_population(const SimulationConfig& cfg) {
    switch (cfg.init) {
        case InitialCondition::SingleGel: return ClusterPopulation::single_gel(cfg.total_mass);
        case InitialCondition::AllMonomers: break;
    }
    return ClusterPopulation(cfg.total_mass);
}

Trajectory run_loop(const SimulationConfig& cfg, ClusterPopulation pop, RandomEngine rng,
                    std::uint64_t start_step, std::uint64_t end_step, bool record_initial) {
    Trajectory traj;
    traj.config = cfg;

    const EventSplit split = EventSplit::from(cfg);
    auto record_sample = [&](std::uint64_t step) {
        traj.samples.push_back({step, pop.cluster_count(), pop.largest_cluster()});
        if (cfg.record_histograms) traj.sample_histograms.push_back(pop.histogram());
    };
    if (record_initial) record_sample(start_step);

    for (std::uint64_t s = start_step + 1; s <= end_step; ++s) {
        const std::uint64_t k_max_before = pop.largest_cluster();
        bool coalescence_attempt = false;
        const EventOutcome out =
            step_impl(pop, split, cfg.frag_threshold, rng, coalescence_attempt);
        if (coalescence_attempt)
            ++traj.coalescence_attempts;
        else
            ++traj.fragmentation_attempts;

        if (out.kind == EventOutcome::Kind::Shattered)
            traj.shatter_events.push_back({s, out.size, out.size == k_max_before});

        const std::uint64_t k_max_after = pop.largest_cluster();
        int sign = 0;
        if (k_max_after > k_max_before) {
            sign = 1;
            ++traj.delta_counts.up;
        } else if (k_max_after < k_max_before) {
            sign = -1;
            ++traj.delta_counts.down;
        }
        ++traj.delta_counts.total;
        if (cfg.record_delta_signs) traj.delta_signs.push(sign);

        if (s % cfg.sample_interval == 0) record_sample(s);
    }
    if (end_step % cfg.sample_interval != 0 && end_step > start_step) record_sample(end_step);

    traj.final_step = end_step;
    traj.final_state = pop.histogram();
    traj.final_rng_state = engine_state_string(rng);
    traj.rng_fingerprint = fnv1a64(traj.final_rng_state);
    return traj;
}

}  // namespace

EventOutcome step(ClusterPopulation& pop, const SimulationConfig& cfg, RandomEngine& rng) {
    bool coalescence_attempt = false;
    return step_impl(pop, EventSplit::from(cfg), cfg.frag_threshold, rng, coalescence_attempt);
}

Trajectory run(const SimulationConfig& cfg) {
    cfg.validate();
    return run_loop(cfg, initial_population(cfg), make_engine(cfg.seed), 0, cfg.max_steps,
                    /*record_initial=*/true);
}

Trajectory run_from(const Checkpoint& checkpoint, std::uint64_t additional_steps) {
    checkpoint.config.validate();
    if (additional_steps == 0) throw std::invalid_argument("additional_steps: must be >= 1");
    SimulationConfig cfg = checkpoint.config;
    cfg.max_steps = checkpoint.step + additional_steps;
    return run_loop(cfg, ClusterPopulation::from_histogram(checkpoint.state),
                    engine_from_state(checkpoint.rng_state), checkpoint.step, cfg.max_steps,
                    /*record_initial=*/false);
}

Checkpoint make_checkpoint(const Trajectory& trajectory) {
    return {trajectory.config, trajectory.final_step, trajectory.final_state,
            trajectory.final_rng_state};
}

std::vector<Trajectory> run_ensemble(const SimulationConfig& cfg, unsigned replicas,
                                     unsigned workers) {
    cfg.validate();
    if (replicas == 0) throw std::invalid_argument("replicas: must be >= 1");
    std::vector<Trajectory> results(replicas);
    parallel_for_index(replicas, workers, [&](std::size_t k) {
        SimulationConfig child = cfg;
        child.seed = child_seed(cfg.seed, k);
        results[k] = run(child);
    });
    return results;
}

unsigned default_workers() {
    if (const char* env = std::getenv("GELSHATTER_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace gelshatter
