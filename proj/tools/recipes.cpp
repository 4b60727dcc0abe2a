#include "recipes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "gelshatter/analysis.hpp"
#include "gelshatter/campaign.hpp"
#include "gelshatter/engine.hpp"
#include "gelshatter/io.hpp"
#include "gelshatter/observables.hpp"

namespace gelshatter::recipes {

namespace fs = std::filesystem;

namespace {

SimulationConfig base_run(std::uint64_t mass, double k_hat, double f_hat,
                          std::uint64_t steps, std::uint64_t seed,
                          std::uint64_t interval) {
    SimulationConfig cfg;
    cfg.total_mass = mass;
    cfg.coalescence_rate = k_hat;
    cfg.fragmentation_rate = f_hat;
    cfg.seed = seed;
    cfg.max_steps = steps;
    cfg.sample_interval = interval;
    return cfg;
}

void write_recipe(const fs::path& out, const std::string& description) {
    io::write_text_file(out / "recipe.txt", description);
}

}  // namespace

int reproduce_fig1(const fs::path& out, std::uint64_t seed, unsigned /*workers*/,
                   std::uint64_t median_window) {
    auto cfg = base_run(100000, 0.99, 0.01, 40'000'000, seed, 10000);
    cfg.frag_threshold = 10000;
    cfg.record_histograms = true;

    std::ostringstream recipe;
    recipe << "# time-averaged size distribution with a fragmentation barrier\n"
           << "M = " << cfg.total_mass << "\nK = " << cfg.coalescence_rate
           << "\nF = " << cfg.fragmentation_rate << "\nthreshold = " << cfg.frag_threshold
           << "\nsteps = " << cfg.max_steps << "\nsample_interval = " << cfg.sample_interval
           << "\nseed = " << seed
           << "\n# step budget is an estimate: enough barrier-crossing cycles for a\n"
           << "# smooth time average; enlarge for smoother tails\n";
    write_recipe(out, recipe.str());

    const auto traj = run(cfg);

    // Discard the pre-gelation transient: histograms recorded before the
    // first largest-cluster shattering.
    std::uint64_t first_cycle_step = 0;
    for (const auto& e : traj.shatter_events) {
        if (e.was_largest) {
            first_cycle_step = e.step;
            break;
        }
    }
    MeanDensityAccumulator acc;
    std::vector<std::pair<std::size_t, double>> snapshot_fits;  // index, alpha
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        if (traj.samples[i].step < first_cycle_step) continue;
        acc.add(traj.sample_histograms[i]);
        try {
            const auto fit = analysis::fit_truncated_powerlaw(traj.sample_histograms[i], 1,
                                                              cfg.frag_threshold);
            snapshot_fits.emplace_back(i, fit.alpha);
        } catch (const analysis::FitError&) {
        }
    }
    const auto density = acc.mean();
    io::write_size_value_csv(out / "density.csv", "size", "value",
                             std::vector<std::pair<std::uint64_t, double>>(density.begin(),
                                                                           density.end()));
    io::write_size_value_csv(out / "ccdf.csv", "size", "value", ccdf(density));

    // k = 1 carries the just-shattered mass still in transit; the cascade
    // power law starts at k = 2.
    const auto fit = analysis::fit_truncated_powerlaw(density, 2, cfg.frag_threshold);
    const auto full = analysis::fit_truncated_powerlaw(density, 1, cfg.frag_threshold);
    std::ostringstream fit_json;
    fit_json << "{\n  \"alpha\": " << fit.alpha << ",\n  \"k_min\": " << fit.k_min
             << ",\n  \"k_max_fit\": " << fit.k_max_fit
             << ",\n  \"alpha_with_monomers\": " << full.alpha
             << ",\n  \"histograms\": " << acc.count() << "\n}\n";
    io::write_text_file(out / "fit.json", fit_json.str());

    // Snapshot whose instantaneous exponent is closest to the median over the
    // last `median_window` fits (all of them by default).
    if (!snapshot_fits.empty()) {
        if (median_window > 0 && snapshot_fits.size() > median_window)
            snapshot_fits.erase(snapshot_fits.begin(),
                                snapshot_fits.end() - static_cast<long>(median_window));
        std::vector<double> alphas;
        for (const auto& [idx, alpha] : snapshot_fits) alphas.push_back(alpha);
        std::nth_element(alphas.begin(), alphas.begin() + alphas.size() / 2, alphas.end());
        const double median = alphas[alphas.size() / 2];
        const auto best = *std::min_element(
            snapshot_fits.begin(), snapshot_fits.end(), [&](const auto& a, const auto& b) {
                return std::abs(a.second - median) < std::abs(b.second - median);
            });
        std::vector<std::pair<std::uint64_t, double>> snap;
        for (const auto& [size, count] : traj.sample_histograms[best.first].counts)
            snap.emplace_back(size, static_cast<double>(count));
        io::write_size_value_csv(out / "median_snapshot.csv", "size", "value", snap);
    }

    io::write_text_file(out / "fig1.gp",
                        "set logscale xy\n"
                        "set xlabel 'cluster size k'\n"
                        "set datafile separator ','\n"
                        "set terminal pngcairo size 900,420\n"
                        "set output 'fig1.png'\n"
                        "set multiplot layout 1,2\n"
                        "set ylabel 'clusters larger than k'\n"
                        "plot 'ccdf.csv' skip 1 with points pt 7 ps 0.3 title 'time average'\n"
                        "set ylabel 'mean cluster density'\n"
                        "plot 'density.csv' skip 1 with points pt 7 ps 0.3 title 'time average', \\\n"
                        "     'median_snapshot.csv' skip 1 with lines title 'median snapshot', \\\n"
                        "     [1:1e4] 0.7*x**(-2.5) title 'k^{-5/2}'\n"
                        "unset multiplot\n");
    std::printf("fig1 done: alpha=%.3f over %llu histograms -> %s\n", fit.alpha,
                static_cast<unsigned long long>(acc.count()), out.string().c_str());
    return 0;
}

int reproduce_fig2(const fs::path& out, std::uint64_t seed, unsigned /*workers*/) {
    auto cfg = base_run(100000, 0.99, 0.01, 2'000'000, seed, 1000);
    cfg.record_histograms = true;

    std::ostringstream recipe;
    recipe << "# gel-shatter cycle portrait\n"
           << "M = " << cfg.total_mass << "\nK = " << cfg.coalescence_rate
           << "\nF = " << cfg.fragmentation_rate << "\nsteps = " << cfg.max_steps
           << "\nsample_interval = " << cfg.sample_interval << "\nseed = " << seed << "\n";
    write_recipe(out, recipe.str());

    const auto traj = run(cfg);
    io::write_samples_csv(out / "phase.csv", traj.samples);
    io::write_shatter_events_csv(out / "shatter_events.csv", traj.shatter_events);

    std::ostringstream alpha_csv;
    alpha_csv << "step,alpha\n";
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        try {
            const auto fit = analysis::fit_truncated_powerlaw(traj.sample_histograms[i], 1);
            alpha_csv << traj.samples[i].step << ',' << fit.alpha << '\n';
        } catch (const analysis::FitError&) {
        }
    }
    io::write_text_file(out / "alpha_t.csv", alpha_csv.str());

    io::write_text_file(out / "fig2.gp",
                        "set datafile separator ','\n"
                        "set terminal pngcairo size 1200,420\n"
                        "set output 'fig2.png'\n"
                        "set multiplot layout 1,3\n"
                        "set xlabel 'k_{max}'\nset ylabel 'N'\n"
                        "plot 'phase.csv' skip 1 using 3:2 with lines lw 0.5 notitle\n"
                        "set xlabel 'step'\nset ylabel 'alpha'\n"
                        "plot 'alpha_t.csv' skip 1 using 1:2 with lines notitle\n"
                        "set xlabel 'step'\nset ylabel 'k_{max}'\n"
                        "plot 'phase.csv' skip 1 using 1:3 with lines notitle\n"
                        "unset multiplot\n");

    const auto cycles = recurrence_times(traj.shatter_events).size();
    std::printf("fig2 done: %zu cycles -> %s\n", cycles, out.string().c_str());
    return 0;
}

int reproduce_fig3(const fs::path& out, std::uint64_t seed, unsigned workers) {
    CampaignSpec spec;
    for (const std::uint64_t mass : {std::uint64_t{300}, std::uint64_t{30000}}) {
        for (const double f_hat : {1e-3, 1e-1}) {
            spec.grid.push_back({mass, 1.0 - f_hat, f_hat, 1});
        }
    }
    spec.replicas = 4;
    spec.master_seed = seed;
    spec.target_cycles = 200;
    spec.step_cap = 20'000'000;
    spec.min_steps = 200'000;
    spec.heatmap_bins = 100;
    spec.out_dir = (out / "campaign").string();

    std::ostringstream recipe;
    recipe << "# occupancy heat maps over (k_max/M, N/M)\n"
           << "M_values = 300, 30000\nF_values = 1e-3, 1e-1\nK_rule = one_minus_F\n"
           << "replicas = " << spec.replicas << "\ntarget_cycles = " << spec.target_cycles
           << "\nseed = " << seed << "\n";
    write_recipe(out, recipe.str());

    const auto result = run_campaign(spec, workers);

    std::ostringstream gp;
    gp << "set terminal pngcairo size 900,900\nset output 'fig3.png'\n"
       << "set multiplot layout 2,2\nset datafile separator ','\n"
       << "set xlabel 'k_{max}/M'\nset ylabel 'N/M'\n"
       << "set palette negative\nunset colorbox\n";
    for (std::size_t p = 0; p < spec.grid.size(); ++p) {
        gp << "set title 'M=" << spec.grid[p].total_mass << " F=" << spec.grid[p].f_hat
           << "'\n"
           << "plot 'campaign/point_" << p
           << "_heatmap.csv' matrix using ($1/100):($2/100):($3 > 0 ? log10($3) : 1/0) "
              "with image notitle\n";
    }
    gp << "unset multiplot\n";
    io::write_text_file(out / "fig3.gp", gp.str());

    std::printf("fig3 done: %zu heat maps -> %s\n", result.points.size(),
                out.string().c_str());
    return result.any_failed ? 1 : 0;
}

int reproduce_fig4(const fs::path& out, std::uint64_t seed, unsigned workers, bool full) {
    CampaignSpec spec;
    std::vector<std::uint64_t> masses{100, 300, 1000, 3000, 10000};
    if (full) {
        masses.push_back(30000);
        masses.push_back(100000);
    }
    const std::vector<double> f_values{1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
    for (const auto mass : masses)
        for (const double f_hat : f_values)
            spec.grid.push_back({mass, 1.0 - f_hat, f_hat, 1});
    // Edge points pushing r below 1e-2 and up to 1e4.
    spec.grid.push_back({100, 1.0 - 5e-5, 5e-5, 1});
    spec.grid.push_back({100, 1.0 - 1e-5, 1e-5, 1});
    spec.grid.push_back({10000, 0.5, 0.5, 1});
    if (full) spec.grid.push_back({100000, 0.5, 0.5, 1});

    spec.replicas = 4;
    spec.master_seed = seed;
    spec.target_cycles = 40;
    spec.step_cap = full ? 2'000'000'000 : 100'000'000;
    spec.heatmaps = false;
    spec.out_dir = (out / "campaign").string();

    if (full)
        std::printf("fig4 --full: large grid, expect a long runtime\n");

    std::ostringstream recipe;
    recipe << "# recurrence-time collapse and cyclicity\n"
           << "M_values = ";
    for (std::size_t i = 0; i < masses.size(); ++i)
        recipe << (i ? ", " : "") << masses[i];
    recipe << "\nF_values = 1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1\n"
           << "K_rule = one_minus_F\n"
           << "extra_points = 100:0.99995:5e-5:1, 100:0.99999:1e-5:1, 10000:0.5:0.5:1\n"
           << "replicas = " << spec.replicas << "\ntarget_cycles = " << spec.target_cycles
           << "\nseed = " << seed
           << "\n# budgets are automatic (target_cycles x expected recurrence time)\n";
    write_recipe(out, recipe.str());

    const auto result = run_campaign(spec, workers);

    io::write_text_file(out / "fig4.gp",
                        "set datafile separator ','\n"
                        "set terminal pngcairo size 1000,420\n"
                        "set output 'fig4.png'\n"
                        "set multiplot layout 1,2\n"
                        "set logscale xy\nset xlabel 'r'\nset ylabel 'F <t_r>'\n"
                        "plot 'campaign/scaling.csv' skip 1 using 4:6 with points pt 7 "
                        "title 'points', x**0.5 title 'r^{1/2}', 1 title '1'\n"
                        "unset logscale y\nset logscale x\nset ylabel 'cyclicity'\n"
                        "plot 'campaign/scaling.csv' skip 1 using 4:7 with points pt 7 "
                        "notitle\n"
                        "unset multiplot\n");

    if (result.collapse)
        std::printf("fig4 done: slope=%.3f plateau=%.3f -> %s\n", result.collapse->slope,
                    result.collapse->plateau, out.string().c_str());
    else
        std::printf("fig4 done (collapse windows not both covered) -> %s\n",
                    out.string().c_str());
    return result.any_failed ? 1 : 0;
}

}  // namespace gelshatter::recipes
