#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gelshatter/analysis.hpp"
#include "gelshatter/config.hpp"
#include "gelshatter/observables.hpp"

namespace gelshatter {

struct CampaignPoint {
    std::uint64_t total_mass = 0;
    double k_hat = 0.0;
    double f_hat = 0.0;
    std::uint64_t frag_threshold = 1;

    double r() const {
        return f_hat * static_cast<double>(total_mass) / k_hat;
    }
};

/// A sweep over (M, K_hat, F_hat, threshold) points with replicated runs per
/// point. Step budgets are either explicit or derived from the expected
/// recurrence time so that roughly target_cycles cycles are observed.
struct CampaignSpec {
    std::vector<CampaignPoint> grid;
    unsigned replicas = 4;
    std::uint64_t master_seed = 1;
    std::uint64_t explicit_steps = 0;  // 0 selects the automatic budget
    double target_cycles = 30.0;
    std::uint64_t step_cap = 200'000'000;
    std::uint64_t min_steps = 200'000;
    std::uint64_t sample_interval = 0;  // 0 selects an automatic cadence
    std::uint32_t heatmap_bins = 100;
    bool heatmaps = true;
    std::string out_dir = "campaign_out";

    /// Expected recurrence time: 1/F_hat when the gel is forced, the
    /// sqrt(pi M / (2 F_hat K_hat)) diffusive estimate otherwise; the budget
    /// covers target_cycles of whichever is longer, capped at step_cap.
    std::uint64_t budget_for(const CampaignPoint& point) const;
    std::uint64_t cadence_for(std::uint64_t budget) const;

    SimulationConfig config_for(std::size_t point_index) const;

    void validate() const;

    /// Reads a flat key = value campaign file. Grid keys: `M_values` and
    /// `F_values` (comma lists, cross product) with `K_rule = one_minus_F`
    /// or `K_value = <rate>`, plus optional `extra_points = M:K:F:T, ...`.
    static CampaignSpec from_file(const std::filesystem::path& path);
    static CampaignSpec from_flat_map(const std::map<std::string, std::string>& kv);
};

struct PointSummary {
    std::size_t index = 0;
    CampaignPoint point;
    std::uint64_t seed = 0;
    std::uint64_t steps = 0;
    unsigned replicas = 0;
    std::uint64_t n_cycles = 0;
    double mean_tr = 0.0;
    double cyclicity = 0.0;
    double envelope_kmax = 0.0;  // 90th percentile of cycle peaks, 0 if none
    analysis::Regime regime = analysis::Regime::UnforcedGelShatter;
    bool failed = false;
    std::string error;

    analysis::ScalingPoint scaling() const;
};

struct CampaignResult {
    std::vector<PointSummary> points;
    std::optional<analysis::CollapseSummary> collapse;
    bool any_failed = false;
    std::size_t skipped = 0;  // points restored from a previous manifest
};

/// Runs every point of the campaign (parallel over point x replica tasks),
/// writes per-point summaries, the scaling table, heat maps and a manifest
/// under spec.out_dir, and skips points already marked done in an existing
/// manifest. Results are independent of the worker count.
CampaignResult run_campaign(const CampaignSpec& spec, unsigned workers);

}  // namespace gelshatter
