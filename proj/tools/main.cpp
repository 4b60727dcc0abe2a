// gelshatter command-line tool: stochastic coalescence-fragmentation runs,
// parameter sweeps, mean-field integration, and plot-ready data files.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gelshatter/analysis.hpp"
#include "gelshatter/campaign.hpp"
#include "gelshatter/engine.hpp"
#include "gelshatter/io.hpp"
#include "gelshatter/meanfield.hpp"
#include "gelshatter/observables.hpp"
#include "gelshatter/parallel.hpp"

#include "recipes.hpp"

namespace fs = std::filesystem;
using namespace gelshatter;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitBadConfig = 2;

struct FlagValues {
    std::map<std::string, std::string> values;   // from explicit flags
    std::map<std::string, std::string> file;     // from --config

    /// Flags override file values; unset keys fall back to `fallback`.
    std::string get(const std::string& key, const std::string& fallback) const {
        if (auto it = values.find(key); it != values.end()) return it->second;
        if (auto it = file.find(key); it != file.end()) return it->second;
        return fallback;
    }
    bool has(const std::string& key) const {
        return values.count(key) > 0 || file.count(key) > 0;
    }
};

/// Registers a string-valued option that lands in flags.values[key].
void add_flag_option(CLI::App* cmd, FlagValues& flags, const std::string& name,
                     const std::string& key, const std::string& description) {
    cmd->add_option_function<std::string>(
           name, [&flags, key](const std::string& v) { flags.values[key] = v; }, description)
        ->expected(1);
}

SimulationConfig config_from_flags(const FlagValues& flags) {
    SimulationConfig cfg;
    cfg.total_mass = io::parse_uint(flags.get("M", "0"), "--M");
    cfg.coalescence_rate = io::parse_double(flags.get("K", "0"), "--K");
    cfg.fragmentation_rate = io::parse_double(flags.get("F", "0"), "--F");
    cfg.frag_threshold = io::parse_uint(flags.get("threshold", "1"), "--threshold");
    cfg.seed = io::parse_uint(flags.get("seed", "42"), "--seed");
    cfg.max_steps = io::parse_uint(flags.get("steps", "0"), "--steps");
    cfg.sample_interval = io::parse_uint(flags.get("sample_interval", "1000"),
                                         "--sample-interval");
    cfg.record_histograms = io::parse_bool(flags.get("record_histograms", "false"),
                                           "--record-histograms");
    cfg.record_delta_signs = io::parse_bool(flags.get("record_delta_signs", "false"),
                                            "--record-delta-signs");
    cfg.init = initial_condition_from_string(flags.get("init", "monomers"));
    return cfg;
}

void require_fresh_or_force(const fs::path& marker, bool force) {
    if (!force && fs::exists(marker))
        throw std::invalid_argument("output exists: " + marker.string() +
                                    " (pass --force to overwrite)");
}

struct RunReport {
    std::uint64_t final_n = 0;
    std::uint64_t final_kmax = 0;
    std::uint64_t cycles = 0;
    double cyclicity_value = 0.0;
};

RunReport write_run_outputs(const fs::path& dir, const Trajectory& traj) {
    io::write_samples_csv(dir / "samples.csv", traj.samples);
    io::write_shatter_events_csv(dir / "shatter_events.csv", traj.shatter_events);
    io::write_trajectory_json(dir / "run.json", traj);
    io::write_checkpoint(dir / "checkpoint.json", make_checkpoint(traj));
    RunReport report;
    report.final_n = traj.final_sample().n_clusters;
    report.final_kmax = traj.final_sample().k_max;
    report.cycles = recurrence_times(traj.shatter_events).size();
    report.cyclicity_value = cyclicity(traj);
    return report;
}

int cmd_run(const FlagValues& flags, bool force) {
    const fs::path out(flags.get("out", "run_out"));
    const unsigned replicas =
        static_cast<unsigned>(io::parse_uint(flags.get("replicas", "1"), "--replicas"));
    const unsigned workers = flags.has("workers")
                                 ? static_cast<unsigned>(io::parse_uint(
                                       flags.get("workers", "1"), "--workers"))
                                 : default_workers();

    if (flags.has("resume")) {
        const auto checkpoint = io::read_checkpoint(flags.get("resume", ""));
        const std::uint64_t extra = io::parse_uint(flags.get("steps", "0"), "--steps");
        require_fresh_or_force(out / "run.json", force);
        const auto traj = run_from(checkpoint, extra);
        const auto report = write_run_outputs(out, traj);
        std::printf("resumed %llu steps: N=%llu k_max=%llu cycles=%llu K=%.4f\n",
                    static_cast<unsigned long long>(extra),
                    static_cast<unsigned long long>(report.final_n),
                    static_cast<unsigned long long>(report.final_kmax),
                    static_cast<unsigned long long>(report.cycles), report.cyclicity_value);
        return 0;
    }

    const SimulationConfig cfg = config_from_flags(flags);
    cfg.validate();
    require_fresh_or_force(out / (replicas > 1 ? "replica_0/run.json" : "run.json"), force);

    if (replicas == 1) {
        const auto traj = run(cfg);
        const auto report = write_run_outputs(out, traj);
        std::printf("run done: N=%llu k_max=%llu cycles=%llu K=%.4f\n",
                    static_cast<unsigned long long>(report.final_n),
                    static_cast<unsigned long long>(report.final_kmax),
                    static_cast<unsigned long long>(report.cycles), report.cyclicity_value);
        return 0;
    }

    const auto trajectories = run_ensemble(cfg, replicas, workers);
    std::uint64_t cycles = 0;
    DeltaCounts pooled;
    for (unsigned k = 0; k < replicas; ++k) {
        const auto report =
            write_run_outputs(out / ("replica_" + std::to_string(k)), trajectories[k]);
        cycles += report.cycles;
        pooled += trajectories[k].delta_counts;
    }
    std::printf("ensemble done: replicas=%u cycles=%llu K=%.4f\n", replicas,
                static_cast<unsigned long long>(cycles), cyclicity(pooled));
    return 0;
}

int cmd_sweep(const FlagValues& flags, bool force) {
    CampaignSpec spec = CampaignSpec::from_file(flags.get("campaign", "campaign.txt"));
    if (flags.has("out")) spec.out_dir = flags.get("out", spec.out_dir);
    const unsigned workers = flags.has("workers")
                                 ? static_cast<unsigned>(io::parse_uint(
                                       flags.get("workers", "1"), "--workers"))
                                 : default_workers();
    if (force) fs::remove(fs::path(spec.out_dir) / "manifest.json");

    const auto result = run_campaign(spec, workers);
    std::printf("sweep done: %zu points (%zu restored), table at %s/scaling.csv\n",
                result.points.size(), result.skipped, spec.out_dir.c_str());
    if (result.collapse) {
        std::printf("collapse: slope=%.3f plateau=%.3f (n=%zu/%zu)\n",
                    result.collapse->slope, result.collapse->plateau,
                    result.collapse->n_slope_points, result.collapse->n_plateau_points);
    }
    for (const auto& p : result.points)
        if (p.failed)
            std::fprintf(stderr, "point %zu failed: %s\n", p.index, p.error.c_str());
    return result.any_failed ? kExitFailure : 0;
}

int cmd_meanfield(const FlagValues& flags) {
    using namespace gelshatter::meanfield;
    const double k_hat = io::parse_double(flags.get("K", "0.1"), "--K");
    const double f_hat = io::parse_double(flags.get("F", "0.9"), "--F");
    const auto k_cut = static_cast<std::size_t>(io::parse_uint(flags.get("Kc", "1000"), "--Kc"));
    const auto k_out = static_cast<std::size_t>(
        io::parse_uint(flags.get("kmax_out", std::to_string(k_cut)), "--kmax-out"));
    const fs::path out(flags.get("out", "meanfield_out"));

    // Stability of the linear shattering tail bounds the step: the fastest
    // class relaxes at (K+F)*Kc and the RK4 real-axis limit is ~2.79.
    const double dt_default = 2.5 / ((k_hat + f_hat) * static_cast<double>(k_cut));
    const double dt = flags.has("dt") ? io::parse_double(flags.get("dt", ""), "--dt") : dt_default;
    const double t_total = io::parse_double(flags.get("T", "400"), "--T");

    const Params params{k_hat, f_hat, 1.0};
    State state = State::monomers(k_cut);
    const double mass0 = state.mass();
    const double chunk = std::max(1.0, t_total / 40.0);
    while (state.t < t_total) {
        state = integrate(std::move(state), params, dt, std::min(chunk, t_total - state.t));
        if (rhs_inf_norm(state, params) < 1e-10) break;
    }
    const double drift = std::abs(state.mass() - mass0) / mass0;

    std::vector<std::pair<std::uint64_t, double>> density;
    for (std::size_t k = 1; k <= k_cut; ++k) density.emplace_back(k, state.n[k]);
    io::write_size_value_csv(out / "density.csv", "k", "n_k", density);

    const auto closed = catalan_steady_state(k_hat, f_hat, k_out);
    std::ostringstream compare;
    compare << "k,rho_integrated,rho_closed_form,rel_err\n";
    compare.precision(17);
    const double mass = state.mass();
    for (std::size_t k = 1; k <= std::min(k_out, k_cut); ++k) {
        const double rho_sim = static_cast<double>(k) * state.n[k] / mass;
        const double rho_ref = closed.rho[k];
        const double rel = rho_ref != 0.0 ? std::abs(rho_sim - rho_ref) / rho_ref : 0.0;
        compare << k << ',' << rho_sim << ',' << rho_ref << ',' << rel << '\n';
    }
    io::write_text_file(out / "steady_compare.csv", compare.str());

    std::vector<std::pair<std::uint64_t, double>> rho_rows;
    for (std::size_t k = 1; k <= k_out; ++k) rho_rows.emplace_back(k, closed.rho[k]);
    io::write_size_value_csv(out / "steady_state.csv", "k", "rho_k", rho_rows);

    std::printf(
        "meanfield done: t=%.2f gamma=%.6f rho1=%.6f branch_ratio=%.6f mass_drift=%.2e\n",
        state.t, closed.gamma, closed.rho1, closed.branch_ratio, drift);
    return 0;
}

int cmd_analyze(const FlagValues& flags) {
    fs::path in(flags.get("in", "run_out"));
    if (fs::is_directory(in)) in /= "run.json";
    const auto traj = io::read_trajectory_json(in);
    const fs::path out(flags.get("out", in.parent_path().empty()
                                           ? fs::path(".")
                                           : in.parent_path()));

    const auto times = recurrence_times(traj.shatter_events);
    std::vector<double> samples(times.begin(), times.end());
    const double k_value = cyclicity(traj);

    std::ostringstream report;
    report << "{\n";
    report << "  \"n_cycles\": " << times.size() << ",\n";
    report << "  \"cyclicity\": " << k_value << ",\n";
    report << "  \"first_interval_excluded\": true,\n";
    const auto& cfg = traj.config;
    const double r = cfg.timescale_ratio();
    report << "  \"r\": " << r << ",\n";
    report << "  \"regime\": \"" << analysis::to_string(analysis::classify_regime(r))
           << "\",\n";
    if (samples.size() >= 2) {
        double sum = 0.0;
        for (double t : samples) sum += t;
        const double mean_tr = sum / static_cast<double>(samples.size());
        const auto expo = analysis::fit_exponential(samples);
        const auto ray = analysis::fit_rayleigh(samples);
        const double ks_expo = analysis::ks_distance(
            samples, [&](double x) { return analysis::exponential_cdf(expo.rate, x); });
        const double ks_ray = analysis::ks_distance(
            samples, [&](double x) { return analysis::rayleigh_cdf(ray.sigma, x); });
        report << "  \"mean_tr\": " << mean_tr << ",\n";
        report << "  \"g\": " << cfg.fragmentation_rate * mean_tr << ",\n";
        report << "  \"exponential\": {\"rate\": " << expo.rate << ", \"ks\": " << ks_expo
               << "},\n";
        report << "  \"rayleigh\": {\"sigma\": " << ray.sigma << ", \"ks\": " << ks_ray
               << "},\n";
        report << "  \"preferred_model\": \""
               << (ks_expo < ks_ray ? "exponential" : "rayleigh") << "\",\n";
        // Growth-rate constant implied by the Rayleigh scale.
        const double c = std::numbers::pi * static_cast<double>(cfg.total_mass) /
                         (2.0 * cfg.fragmentation_rate * cfg.coalescence_rate * mean_tr *
                          mean_tr);
        report << "  \"growth_constant_c\": " << c << ",\n";
    }
    try {
        const auto fit = analysis::fit_truncated_powerlaw(
            traj.final_state, io::parse_uint(flags.get("k_min", "1"), "--k-min"));
        report << "  \"final_state_alpha\": " << fit.alpha << ",\n";
    } catch (const analysis::FitError&) {
        // final snapshot may be degenerate (single gel, all monomers)
    }
    report << "  \"fingerprint\": \"" << std::hex << traj.rng_fingerprint << std::dec
           << "\"\n}\n";
    io::write_text_file(out / "analysis.json", report.str());
    std::printf("analyze done: cycles=%zu K=%.4f -> %s\n", times.size(), k_value,
                (out / "analysis.json").string().c_str());
    return 0;
}

int cmd_reproduce(const std::string& figure, const FlagValues& flags, bool force, bool full) {
    const fs::path out(flags.get("out", "reproduce_" + figure));
    const std::uint64_t seed = io::parse_uint(flags.get("seed", "42"), "--seed");
    const unsigned workers = flags.has("workers")
                                 ? static_cast<unsigned>(io::parse_uint(
                                       flags.get("workers", "1"), "--workers"))
                                 : default_workers();
    require_fresh_or_force(out / "recipe.txt", force);
    if (figure == "fig1")
        return recipes::reproduce_fig1(
            out, seed, workers,
            io::parse_uint(flags.get("median_window", "0"), "--median-window"));
    if (figure == "fig2") return recipes::reproduce_fig2(out, seed, workers);
    if (figure == "fig3") return recipes::reproduce_fig3(out, seed, workers);
    if (figure == "fig4") return recipes::reproduce_fig4(out, seed, workers, full);
    throw std::invalid_argument("figure: unknown id '" + figure +
                                "' (expected fig1..fig4)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic coalescence-fragmentation simulator and analysis toolkit"};
    app.require_subcommand(1);

    FlagValues flags;
    std::string config_path;
    bool force = false;
    bool full = false;
    std::string figure;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "flat key = value config file");
        add_flag_option(cmd, flags, "--out", "out", "output directory");
        add_flag_option(cmd, flags, "--workers", "workers", "worker threads");
        cmd->add_flag("--force", force, "overwrite existing outputs");
    };

    auto* run_cmd = app.add_subcommand("run", "single run or replicated ensemble");
    add_common(run_cmd);
    add_flag_option(run_cmd, flags, "--M", "M", "total monomer units");
    add_flag_option(run_cmd, flags, "--K", "K", "coalescence rate");
    add_flag_option(run_cmd, flags, "--F", "F", "fragmentation rate");
    add_flag_option(run_cmd, flags, "--threshold", "threshold",
                    "sizes <= threshold never shatter");
    add_flag_option(run_cmd, flags, "--seed", "seed", "random seed");
    add_flag_option(run_cmd, flags, "--steps", "steps", "computational steps");
    add_flag_option(run_cmd, flags, "--sample-interval", "sample_interval",
                    "steps between samples");
    add_flag_option(run_cmd, flags, "--replicas", "replicas", "independent replicas");
    add_flag_option(run_cmd, flags, "--init", "init", "monomers | single-gel");
    add_flag_option(run_cmd, flags, "--resume", "resume", "checkpoint file to continue");
    run_cmd->add_flag_callback(
        "--record-histograms",
        [&flags] { flags.values["record_histograms"] = "true"; },
        "store a size histogram at every sample");
    run_cmd->add_flag_callback(
        "--record-delta-signs",
        [&flags] { flags.values["record_delta_signs"] = "true"; },
        "store the per-step k_max change sign log");

    auto* sweep_cmd = app.add_subcommand("sweep", "campaign over a parameter grid");
    add_common(sweep_cmd);
    add_flag_option(sweep_cmd, flags, "--campaign", "campaign", "campaign file");

    auto* mf_cmd = app.add_subcommand("meanfield", "integrate the deterministic system");
    add_common(mf_cmd);
    add_flag_option(mf_cmd, flags, "--K", "K", "coalescence rate");
    add_flag_option(mf_cmd, flags, "--F", "F", "fragmentation rate");
    add_flag_option(mf_cmd, flags, "--Kc", "Kc", "truncation size");
    add_flag_option(mf_cmd, flags, "--dt", "dt", "integration step");
    add_flag_option(mf_cmd, flags, "--T", "T", "integration horizon");
    add_flag_option(mf_cmd, flags, "--kmax-out", "kmax_out", "closed-form output sizes");

    auto* an_cmd = app.add_subcommand("analyze", "re-run analysis on a stored trajectory");
    add_common(an_cmd);
    add_flag_option(an_cmd, flags, "--in", "in", "run directory or run.json");
    add_flag_option(an_cmd, flags, "--k-min", "k_min", "power-law window lower edge");

    auto* rep_cmd = app.add_subcommand("reproduce", "canonical figure campaigns");
    add_common(rep_cmd);
    rep_cmd->add_option("figure", figure, "fig1 | fig2 | fig3 | fig4")->required();
    rep_cmd->add_flag("--full", full, "full-scale fig4 grid (long runtime)");
    add_flag_option(rep_cmd, flags, "--seed", "seed", "master seed");
    add_flag_option(rep_cmd, flags, "--median-window", "median_window",
                    "fig1: median taken over the last N snapshot fits (0 = all)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) flags.file = io::read_flat_file(config_path);
        if (run_cmd->parsed()) return cmd_run(flags, force);
        if (sweep_cmd->parsed()) return cmd_sweep(flags, force);
        if (mf_cmd->parsed()) return cmd_meanfield(flags);
        if (an_cmd->parsed()) return cmd_analyze(flags);
        if (rep_cmd->parsed()) return cmd_reproduce(figure, flags, force, full);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    }
    return 0;
}
