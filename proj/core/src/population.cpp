#include "gelshatter/population.hpp"

#include <stdexcept>

namespace gelshatter {

double coalescence_rate(std::uint64_t i, std::uint64_t j, const SimulationConfig& cfg) {
    const double m = static_cast<double>(cfg.total_mass);
    return cfg.coalescence_rate * (static_cast<double>(i) / m) * (static_cast<double>(j) / m);
}

double fragmentation_rate(std::uint64_t i, const SimulationConfig& cfg) {
    if (i <= cfg.frag_threshold) return 0.0;
    return cfg.fragmentation_rate * static_cast<double>(i) / static_cast<double>(cfg.total_mass);
}

void SizeHistogram::validate() const {
    std::uint64_t mass = 0;
    for (const auto& [size, count] : counts) {
        if (size == 0) throw std::invalid_argument("histogram: cluster size 0");
        if (count == 0) throw std::invalid_argument("histogram: zero count entry");
        mass += size * count;
    }
    if (mass != total_mass)
        throw std::invalid_argument("histogram: mass " + std::to_string(mass) +
                                    " does not match total_mass " + std::to_string(total_mass));
}

ClusterPopulation::ClusterPopulation(std::uint64_t total_mass) {
    if (total_mass < 2) throw std::invalid_argument("total_mass: must be >= 2");
    fen_ = FenwickTree(total_mass);
    fen_.add(1, total_mass);
    n_clusters_ = total_mass;
    k_max_ = 1;
}

ClusterPopulation ClusterPopulation::single_gel(std::uint64_t total_mass) {
    if (total_mass < 2) throw std::invalid_argument("total_mass: must be >= 2");
    ClusterPopulation pop;
    pop.fen_ = FenwickTree(total_mass);
    pop.fen_.add(total_mass, total_mass);
    pop.n_clusters_ = 1;
    pop.k_max_ = total_mass;
    return pop;
}

ClusterPopulation ClusterPopulation::from_histogram(const SizeHistogram& hist) {
    hist.validate();
    if (hist.total_mass < 2) throw std::invalid_argument("total_mass: must be >= 2");
    ClusterPopulation pop;
    std::vector<std::uint64_t> masses(hist.total_mass + 1, 0);
    std::uint64_t n = 0;
    for (const auto& [size, count] : hist.counts) {
        if (size > hist.total_mass)
            throw std::invalid_argument("histogram: cluster size exceeds total_mass");
        masses[size] = size * count;
        n += count;
    }
    pop.fen_.assign(masses);
    pop.n_clusters_ = n;
    pop.k_max_ = hist.largest();
    return pop;
}

void ClusterPopulation::remove_one(std::uint64_t size) {
    fen_.subtract(size, size);
    --n_clusters_;
}

void ClusterPopulation::add_clusters(std::uint64_t size, std::uint64_t count) {
    fen_.add(size, size * count);
    n_clusters_ += count;
    if (size > k_max_) k_max_ = size;
}

std::uint64_t ClusterPopulation::scan_largest() const {
    // The class holding the last mass unit is the largest occupied size.
    return fen_.find(fen_.total() - 1).index;
}

EventOutcome ClusterPopulation::merge_entries(const EntryHandle& a, const EntryHandle& b) {
    if (a == b) return EventOutcome::noop();
    remove_one(a.size);
    remove_one(b.size);
    add_clusters(a.size + b.size, 1);
    return EventOutcome::coalesced(a.size, b.size);
}

EventOutcome ClusterPopulation::shatter_entry(const EntryHandle& a) {
    if (a.is_monomer()) return EventOutcome::noop();
    remove_one(a.size);
    add_clusters(1, a.size);
    if (a.size == k_max_ && fen_.value_at(a.size) == 0) k_max_ = scan_largest();
    return EventOutcome::shattered(a.size);
}

SizeHistogram ClusterPopulation::histogram() const {
    SizeHistogram hist;
    hist.total_mass = fen_.total();
    const auto masses = fen_.values();
    for (std::uint64_t size = 1; size < masses.size(); ++size) {
        if (masses[size] != 0) hist.counts.emplace_hint(hist.counts.end(), size, masses[size] / size);
    }
    return hist;
}

}  // namespace gelshatter
