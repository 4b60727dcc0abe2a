#include "gelshatter/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <mutex>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "gelshatter/engine.hpp"
#include "gelshatter/io.hpp"
#include "gelshatter/parallel.hpp"
#include "gelshatter/rng.hpp"

namespace gelshatter {

using nlohmann::json;

std::uint64_t CampaignSpec::budget_for(const CampaignPoint& point) const {
    if (explicit_steps > 0) return std::min(explicit_steps, step_cap);
    const double m = static_cast<double>(point.total_mass);
    const double forced = 1.0 / point.f_hat;
    const double diffusive =
        std::sqrt(std::numbers::pi * m / (2.0 * point.f_hat * point.k_hat));
    const double per_cycle = std::max(forced, diffusive);
    const double budget = target_cycles * per_cycle;
    const double capped = std::min(budget, static_cast<double>(step_cap));
    return std::max<std::uint64_t>(min_steps, static_cast<std::uint64_t>(capped));
}

std::uint64_t CampaignSpec::cadence_for(std::uint64_t budget) const {
    if (sample_interval > 0) return sample_interval;
    return std::max<std::uint64_t>(1, budget / 100'000);
}

SimulationConfig CampaignSpec::config_for(std::size_t point_index) const {
    const CampaignPoint& pt = grid.at(point_index);
    SimulationConfig cfg;
    cfg.total_mass = pt.total_mass;
    cfg.coalescence_rate = pt.k_hat;
    cfg.fragmentation_rate = pt.f_hat;
    cfg.frag_threshold = pt.frag_threshold;
    cfg.seed = child_seed(master_seed, point_index);
    cfg.max_steps = budget_for(pt);
    cfg.sample_interval = cadence_for(cfg.max_steps);
    return cfg;
}

void CampaignSpec::validate() const {
    if (grid.empty()) throw std::invalid_argument("grid: campaign has no points");
    if (replicas == 0) throw std::invalid_argument("replicas: must be >= 1");
    if (target_cycles <= 0) throw std::invalid_argument("target_cycles: must be > 0");
    if (step_cap == 0) throw std::invalid_argument("step_cap: must be >= 1");
    if (heatmap_bins < 2) throw std::invalid_argument("heatmap_bins: must be >= 2");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        SimulationConfig cfg = config_for(i);
        try {
            cfg.validate();
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("grid point " + std::to_string(i) + ": " + e.what());
        }
    }
}

CampaignSpec CampaignSpec::from_file(const std::filesystem::path& path) {
    return from_flat_map(io::read_flat_file(path));
}

CampaignSpec CampaignSpec::from_flat_map(const std::map<std::string, std::string>& kv) {
    CampaignSpec spec;
    auto get = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };

    std::vector<std::uint64_t> m_values;
    std::vector<double> f_values;
    if (const auto* v = get("M_values"))
        for (const auto& item : io::split_list(*v)) m_values.push_back(io::parse_uint(item, "M_values"));
    if (const auto* v = get("F_values"))
        for (const auto& item : io::split_list(*v)) f_values.push_back(io::parse_double(item, "F_values"));

    std::uint64_t threshold = 1;
    if (const auto* v = get("threshold")) threshold = io::parse_uint(*v, "threshold");

    bool k_one_minus_f = true;
    double k_value = 0.0;
    if (const auto* v = get("K_rule")) {
        if (*v != "one_minus_F")
            throw std::invalid_argument("K_rule: unknown rule '" + *v + "'");
    }
    if (const auto* v = get("K_value")) {
        k_one_minus_f = false;
        k_value = io::parse_double(*v, "K_value");
    }

    for (const auto m : m_values) {
        for (const auto f : f_values) {
            CampaignPoint pt;
            pt.total_mass = m;
            pt.f_hat = f;
            pt.k_hat = k_one_minus_f ? 1.0 - f : k_value;
            pt.frag_threshold = threshold;
            spec.grid.push_back(pt);
        }
    }
    if (const auto* v = get("extra_points")) {
        for (const auto& item : io::split_list(*v)) {
            std::istringstream is(item);
            std::string part;
            std::vector<std::string> parts;
            while (std::getline(is, part, ':')) parts.push_back(part);
            if (parts.size() != 4)
                throw std::invalid_argument("extra_points: expected M:K:F:T, got '" + item + "'");
            CampaignPoint pt;
            pt.total_mass = io::parse_uint(parts[0], "extra_points M");
            pt.k_hat = io::parse_double(parts[1], "extra_points K");
            pt.f_hat = io::parse_double(parts[2], "extra_points F");
            pt.frag_threshold = io::parse_uint(parts[3], "extra_points T");
            spec.grid.push_back(pt);
        }
    }

    if (const auto* v = get("replicas")) spec.replicas = static_cast<unsigned>(io::parse_uint(*v, "replicas"));
    if (const auto* v = get("seed")) spec.master_seed = io::parse_uint(*v, "seed");
    if (const auto* v = get("steps")) spec.explicit_steps = io::parse_uint(*v, "steps");
    if (const auto* v = get("target_cycles")) spec.target_cycles = io::parse_double(*v, "target_cycles");
    if (const auto* v = get("step_cap")) spec.step_cap = io::parse_uint(*v, "step_cap");
    if (const auto* v = get("min_steps")) spec.min_steps = io::parse_uint(*v, "min_steps");
    if (const auto* v = get("sample_interval")) spec.sample_interval = io::parse_uint(*v, "sample_interval");
    if (const auto* v = get("heatmap_bins")) spec.heatmap_bins = static_cast<std::uint32_t>(io::parse_uint(*v, "heatmap_bins"));
    if (const auto* v = get("heatmaps")) spec.heatmaps = io::parse_bool(*v, "heatmaps");
    if (const auto* v = get("out")) spec.out_dir = *v;
    return spec;
}

analysis::ScalingPoint PointSummary::scaling() const {
    return analysis::ScalingPoint::make(static_cast<double>(point.total_mass), point.k_hat,
                                        point.f_hat, mean_tr, cyclicity, n_cycles);
}

namespace {

json point_to_json(const PointSummary& s) {
    return json{{"index", s.index},
                {"M", s.point.total_mass},
                {"K_hat", s.point.k_hat},
                {"F_hat", s.point.f_hat},
                {"threshold", s.point.frag_threshold},
                {"seed", s.seed},
                {"steps", s.steps},
                {"replicas", s.replicas},
                {"n_cycles", s.n_cycles},
                {"mean_tr", s.mean_tr},
                {"cyclicity", s.cyclicity},
                {"envelope_kmax", s.envelope_kmax},
                {"regime", analysis::to_string(s.regime)},
                {"failed", s.failed},
                {"error", s.error}};
}

PointSummary point_from_json(const json& j) {
    PointSummary s;
    s.index = j.at("index").get<std::size_t>();
    s.point.total_mass = j.at("M").get<std::uint64_t>();
    s.point.k_hat = j.at("K_hat").get<double>();
    s.point.f_hat = j.at("F_hat").get<double>();
    s.point.frag_threshold = j.at("threshold").get<std::uint64_t>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.steps = j.at("steps").get<std::uint64_t>();
    s.replicas = j.at("replicas").get<unsigned>();
    s.n_cycles = j.at("n_cycles").get<std::uint64_t>();
    s.mean_tr = j.at("mean_tr").get<double>();
    s.cyclicity = j.at("cyclicity").get<double>();
    s.envelope_kmax = j.at("envelope_kmax").get<double>();
    s.failed = j.at("failed").get<bool>();
    s.error = j.at("error").get<std::string>();
    s.regime = analysis::classify_regime(s.point.r());
    return s;
}

/// Per-replica reduction kept small so long sweeps stay in memory.
struct ReplicaDigest {
    std::vector<std::uint64_t> recurrences;
    std::vector<std::uint64_t> peaks;
    DeltaCounts deltas;
    HeatMap heatmap;
    bool have_heatmap = false;
};

bool same_point(const PointSummary& a, const CampaignSpec& spec, std::size_t index) {
    const CampaignPoint& pt = spec.grid[index];
    return a.point.total_mass == pt.total_mass && a.point.k_hat == pt.k_hat &&
           a.point.f_hat == pt.f_hat && a.point.frag_threshold == pt.frag_threshold &&
           a.seed == spec.config_for(index).seed && a.replicas == spec.replicas &&
           !a.failed;
}

}  // namespace

CampaignResult run_campaign(const CampaignSpec& spec, unsigned workers) {
    spec.validate();
    const std::filesystem::path out(spec.out_dir);
    std::filesystem::create_directories(out);

    // Previously completed points are restored from the manifest.
    std::vector<std::optional<PointSummary>> done(spec.grid.size());
    const auto manifest_path = out / "manifest.json";
    if (std::filesystem::exists(manifest_path)) {
        const json m = json::parse(io::read_text_file(manifest_path));
        for (const auto& jp : m.value("points", json::array())) {
            PointSummary s = point_from_json(jp);
            if (s.index < spec.grid.size() && same_point(s, spec, s.index)) done[s.index] = s;
        }
    }

    struct Task {
        std::size_t point;
        unsigned replica;
    };
    std::vector<Task> tasks;
    std::size_t skipped = 0;
    for (std::size_t p = 0; p < spec.grid.size(); ++p) {
        if (done[p]) {
            ++skipped;
            continue;
        }
        for (unsigned r = 0; r < spec.replicas; ++r) tasks.push_back({p, r});
    }

    std::vector<std::vector<ReplicaDigest>> digests(spec.grid.size());
    std::vector<std::string> task_errors(spec.grid.size());
    for (std::size_t p = 0; p < spec.grid.size(); ++p)
        if (!done[p]) digests[p].resize(spec.replicas);

    std::mutex error_mutex;
    parallel_for_index(tasks.size(), workers, [&](std::size_t t) {
        const auto [p, r] = tasks[t];
        try {
            SimulationConfig cfg = spec.config_for(p);
            cfg.seed = child_seed(cfg.seed, r);
            const Trajectory traj = run(cfg);
            ReplicaDigest& d = digests[p][r];
            d.recurrences = recurrence_times(traj.shatter_events);
            d.peaks = cycle_peaks(traj.shatter_events);
            d.deltas = traj.delta_counts;
            if (spec.heatmaps) {
                d.heatmap = make_heatmap(traj.samples, cfg.total_mass, spec.heatmap_bins,
                                         spec.heatmap_bins);
                d.have_heatmap = true;
            }
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (task_errors[p].empty()) task_errors[p] = e.what();
        }
    });

    // Deterministic aggregation in point / replica order.
    CampaignResult result;
    result.skipped = skipped;
    result.points.resize(spec.grid.size());
    for (std::size_t p = 0; p < spec.grid.size(); ++p) {
        if (done[p]) {
            result.points[p] = *done[p];
            continue;
        }
        PointSummary s;
        s.index = p;
        s.point = spec.grid[p];
        s.seed = spec.config_for(p).seed;
        s.steps = spec.budget_for(spec.grid[p]);
        s.replicas = spec.replicas;
        s.regime = analysis::classify_regime(s.point.r());
        if (!task_errors[p].empty()) {
            s.failed = true;
            s.error = task_errors[p];
            result.points[p] = s;
            result.any_failed = true;
            continue;
        }

        std::vector<std::uint64_t> recurrences;
        std::vector<std::uint64_t> peaks;
        DeltaCounts deltas;
        HeatMap heat;
        bool have_heat = false;
        for (const auto& d : digests[p]) {
            recurrences.insert(recurrences.end(), d.recurrences.begin(), d.recurrences.end());
            peaks.insert(peaks.end(), d.peaks.begin(), d.peaks.end());
            deltas += d.deltas;
            if (d.have_heatmap) {
                if (!have_heat) {
                    heat = d.heatmap;
                    have_heat = true;
                } else {
                    heat.merge(d.heatmap);
                }
            }
        }
        s.n_cycles = recurrences.size();
        if (!recurrences.empty()) {
            double sum = 0.0;
            for (auto t : recurrences) sum += static_cast<double>(t);
            s.mean_tr = sum / static_cast<double>(recurrences.size());
        }
        s.cyclicity = cyclicity(deltas);
        if (!peaks.empty()) {
            std::sort(peaks.begin(), peaks.end());
            s.envelope_kmax = static_cast<double>(
                peaks[static_cast<std::size_t>(0.9 * static_cast<double>(peaks.size() - 1))]);
        }
        result.points[p] = s;

        if (have_heat) {
            const auto stem = "point_" + std::to_string(p);
            io::write_heatmap_csv(out / (stem + "_heatmap.csv"), heat);
            io::write_heatmap_sidecar(out / (stem + "_heatmap.json"), heat,
                                      s.point.total_mass);
        }
    }

    // Scaling table over points with observed cycles.
    std::vector<analysis::ScalingPoint> table;
    for (const auto& s : result.points)
        if (!s.failed && s.n_cycles > 0) table.push_back(s.scaling());
    io::write_scaling_csv(out / "scaling.csv", table);

    try {
        result.collapse = analysis::collapse(table);
    } catch (const std::invalid_argument&) {
        result.collapse.reset();  // grid does not span both windows
    }

    json manifest;
    manifest["master_seed"] = spec.master_seed;
    manifest["replicas"] = spec.replicas;
    manifest["points"] = json::array();
    for (const auto& s : result.points) manifest["points"].push_back(point_to_json(s));
    std::vector<std::filesystem::path> emitted;
    for (const auto& entry : std::filesystem::directory_iterator(out)) {
        if (!entry.is_regular_file() || entry.path().filename() == "manifest.json") continue;
        emitted.push_back(entry.path());
    }
    std::sort(emitted.begin(), emitted.end());
    manifest["files"] = json::array();
    for (const auto& path : emitted)
        manifest["files"].push_back(
            json{{"path", path.filename().string()}, {"digest", io::file_digest(path)}});
    if (result.collapse) {
        manifest["collapse"] = json{{"slope", result.collapse->slope},
                                    {"intercept", result.collapse->intercept},
                                    {"residual_rms", result.collapse->residual_rms},
                                    {"plateau", result.collapse->plateau}};
    }
    manifest["timestamp"] = static_cast<std::uint64_t>(std::time(nullptr));
    io::write_text_file(manifest_path, manifest.dump(2) + "\n");
    return result;
}

}  // namespace gelshatter
