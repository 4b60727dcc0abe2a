#pragma once

#include <cstdint>

#include "gelshatter/config.hpp"
#include "gelshatter/fenwick.hpp"
#include "gelshatter/histogram.hpp"
#include "gelshatter/rng.hpp"

namespace gelshatter {

/// Rate at which two clusters of sizes i and j coalesce:
/// K_hat * (i/M) * (j/M).
double coalescence_rate(std::uint64_t i, std::uint64_t j, const SimulationConfig& cfg);

/// Rate at which a cluster of size i shatters into monomers:
/// F_hat * (i/M) for i > frag_threshold, zero otherwise.
double fragmentation_rate(std::uint64_t i, const SimulationConfig& cfg);

/// One population entry as selected by a size-biased node pick. Monomers are
/// entries of size 1. `index` distinguishes same-sized clusters; handles are
/// valid only until the next mutation.
struct EntryHandle {
    std::uint64_t size = 0;
    std::uint64_t index = 0;

    bool is_monomer() const { return size == 1; }
    auto operator<=>(const EntryHandle&) const = default;
};

struct EventOutcome {
    enum class Kind : std::uint8_t { NoOp, Coalesced, Shattered };

    Kind kind = Kind::NoOp;
    std::uint64_t left = 0;    // first parent size (Coalesced)
    std::uint64_t right = 0;   // second parent size (Coalesced)
    std::uint64_t size = 0;    // merged or shattered size

    static EventOutcome noop() { return {}; }
    static EventOutcome coalesced(std::uint64_t i, std::uint64_t j) {
        return {Kind::Coalesced, i, j, i + j};
    }
    static EventOutcome shattered(std::uint64_t s) {
        return {Kind::Shattered, 0, 0, s};
    }
};

/// Exact multiset of cluster sizes over a conserved budget of monomer units.
///
/// Same-sized clusters are interchangeable, so the state is kept as size
/// classes on a Fenwick tree indexed by size and weighted by class mass
/// (size times count). A node pick u in [0, M) maps to the class containing
/// the u-th mass unit; sampling, merging and shattering are all O(log M).
/// The arrangement is a pure function of the size histogram, which makes
/// checkpoints taken as histograms restore bit-exactly.
///
/// A population belongs to one simulation worker: safe to move between
/// threads, never shared mutably, no internal locking.
class ClusterPopulation {
public:
    /// All-monomer state. total_mass >= 2.
    explicit ClusterPopulation(std::uint64_t total_mass);

    static ClusterPopulation single_gel(std::uint64_t total_mass);
    static ClusterPopulation from_histogram(const SizeHistogram& hist);

    std::uint64_t total_mass() const { return fen_.total(); }
    std::uint64_t monomer_count() const { return fen_.value_at(1); }
    std::uint64_t cluster_count() const { return n_clusters_; }  // N
    std::uint64_t stored_cluster_count() const { return n_clusters_ - monomer_count(); }
    std::uint64_t largest_cluster() const { return k_max_; }

    /// Count of clusters of exactly this size.
    std::uint64_t count_of(std::uint64_t size) const {
        return fen_.value_at(size) / size;
    }

    /// Entry containing the node with mass offset `node`, node in [0, M).
    /// Every node index maps to exactly one entry, so selection through a
    /// uniform node index is size-biased by construction.
    EntryHandle entry_at_node(std::uint64_t node) const {
        const auto loc = fen_.find(node);
        return {loc.index, loc.offset / loc.index};
    }

    /// Size-biased pick: the monomer pool with probability monomer_count/M,
    /// a specific stored cluster with probability size/M.
    EntryHandle sample_entry(RandomEngine& rng) const {
        return entry_at_node(uniform_below(rng, fen_.total()));
    }

    /// Merges two distinct entries into one cluster of the combined size.
    /// A same-entry pair is rejected as NoOp; mass is conserved and N drops
    /// by one on success.
    EventOutcome merge_entries(const EntryHandle& a, const EntryHandle& b);

    /// Shatters a stored cluster into monomers. The monomer pool is rejected
    /// as NoOp; N grows by size-1 on success.
    EventOutcome shatter_entry(const EntryHandle& a);

    SizeHistogram histogram() const;

private:
    ClusterPopulation() = default;

    void remove_one(std::uint64_t size);
    void add_clusters(std::uint64_t size, std::uint64_t count);
    std::uint64_t scan_largest() const;

    FenwickTree fen_;                // index = size, weight = size * count
    std::uint64_t n_clusters_ = 0;
    std::uint64_t k_max_ = 0;
};

}  // namespace gelshatter
