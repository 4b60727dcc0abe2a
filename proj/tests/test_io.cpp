#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "gelshatter/campaign.hpp"
#include "gelshatter/engine.hpp"
#include "gelshatter/io.hpp"

using namespace gelshatter;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("gelshatter_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

SimulationConfig small_config() {
    SimulationConfig cfg;
    cfg.total_mass = 300;
    cfg.coalescence_rate = 0.9;
    cfg.fragmentation_rate = 0.1;
    cfg.seed = 99;
    cfg.max_steps = 20000;
    cfg.sample_interval = 1000;
    return cfg;
}

}  // namespace

TEST_CASE("flat file parsing") {
    const auto kv = io::parse_flat_text(
        "# a comment\n"
        "M = 1e5\n"
        "K = 0.99   # trailing comment\n"
        "name = \"quoted value\"\n"
        "list = 1, 2, 3\n"
        "\n"
        "M = 100\n");
    CHECK(kv.at("M") == "100");  // later keys override
    CHECK(kv.at("K") == "0.99");
    CHECK(kv.at("name") == "quoted value");
    CHECK(io::split_list(kv.at("list")) == std::vector<std::string>{"1", "2", "3"});

    CHECK_THROWS_WITH_AS(io::parse_flat_text("novalue\n"), doctest::Contains("line 1"),
                         std::invalid_argument);
}

TEST_CASE("numeric parsing accepts scientific notation for integers") {
    CHECK(io::parse_uint("1e5", "steps") == 100000);
    CHECK(io::parse_uint("42", "steps") == 42);
    CHECK(io::parse_double("1e-4", "F") == doctest::Approx(1e-4));
    CHECK_THROWS_AS(io::parse_uint("1.5", "steps"), std::invalid_argument);
    CHECK_THROWS_AS(io::parse_uint("-3", "steps"), std::invalid_argument);
    CHECK_THROWS_AS(io::parse_double("abc", "K"), std::invalid_argument);
    CHECK(io::parse_bool("true", "flag"));
    CHECK_FALSE(io::parse_bool("0", "flag"));
}

TEST_CASE("trajectory JSON round trip preserves the analysis payload") {
    const auto traj = run(small_config());
    const auto text = io::trajectory_to_json(traj);
    const auto back = io::trajectory_from_json(text);
    CHECK(back.samples == traj.samples);
    CHECK(back.shatter_events == traj.shatter_events);
    CHECK(back.final_state.counts == traj.final_state.counts);
    CHECK(back.rng_fingerprint == traj.rng_fingerprint);
    CHECK(back.delta_counts.up == traj.delta_counts.up);
    CHECK(back.config.seed == traj.config.seed);
}

TEST_CASE("checkpoint file round trip resumes exactly") {
    TempDir tmp;
    auto cfg = small_config();
    const auto full = run(cfg);

    auto half = cfg;
    half.max_steps = 10000;
    const auto first = run(half);
    const auto ckpt_path = tmp.path / "ckpt.json";
    io::write_checkpoint(ckpt_path, make_checkpoint(first));

    const auto restored = io::read_checkpoint(ckpt_path);
    CHECK(restored.step == 10000);
    const auto second = run_from(restored, 10000);
    CHECK(second.rng_fingerprint == full.rng_fingerprint);
    CHECK(second.final_state.counts == full.final_state.counts);
}

TEST_CASE("histogram JSON round trip") {
    SizeHistogram h;
    h.total_mass = 100;
    h.counts = {{1, 40}, {2, 15}, {30, 1}};
    const auto back = io::histogram_from_json(io::histogram_to_json(h));
    CHECK(back.counts == h.counts);
    CHECK(back.total_mass == 100);
}

TEST_CASE("csv writers emit the specified headers") {
    TempDir tmp;
    std::vector<TrajectorySample> samples{{0, 10, 1}, {5, 8, 3}};
    io::write_samples_csv(tmp.path / "s.csv", samples);
    CHECK(io::read_text_file(tmp.path / "s.csv") == "step,N,k_max\n0,10,1\n5,8,3\n");

    std::vector<ShatterEvent> events{{7, 5, true}};
    io::write_shatter_events_csv(tmp.path / "e.csv", events);
    CHECK(io::read_text_file(tmp.path / "e.csv") == "step,size,was_largest\n7,5,1\n");

    std::vector<std::pair<std::uint64_t, double>> rows{{1, 0.5}, {2, 0.25}};
    io::write_size_value_csv(tmp.path / "d.csv", "k", "rho_k", rows);
    CHECK(io::read_text_file(tmp.path / "d.csv") == "k,rho_k\n1,0.5\n2,0.25\n");
}

TEST_CASE("file digests are content-stable") {
    TempDir tmp;
    io::write_text_file(tmp.path / "a.txt", "payload");
    io::write_text_file(tmp.path / "b.txt", "payload");
    io::write_text_file(tmp.path / "c.txt", "other");
    CHECK(io::file_digest(tmp.path / "a.txt") == io::file_digest(tmp.path / "b.txt"));
    CHECK(io::file_digest(tmp.path / "a.txt") != io::file_digest(tmp.path / "c.txt"));
}

TEST_CASE("campaign spec expansion from a flat file") {
    const auto spec = CampaignSpec::from_flat_map(io::parse_flat_text(
        "M_values = 100, 1000\n"
        "F_values = 1e-3, 1e-2\n"
        "K_rule = one_minus_F\n"
        "replicas = 2\n"
        "seed = 7\n"
        "target_cycles = 10\n"
        "out = unused\n"
        "extra_points = 500:0.5:0.5:1\n"));
    REQUIRE(spec.grid.size() == 5);
    CHECK(spec.grid[0].total_mass == 100);
    CHECK(spec.grid[0].k_hat == doctest::Approx(0.999));
    CHECK(spec.grid[4].total_mass == 500);
    CHECK(spec.grid[4].k_hat == doctest::Approx(0.5));
    CHECK(spec.replicas == 2);
    CHECK_NOTHROW(spec.validate());

    CHECK_THROWS_AS(CampaignSpec::from_flat_map(io::parse_flat_text("K_rule = huh\n")),
                    std::invalid_argument);
}

TEST_CASE("campaign budgets cover the slower of the two cycle estimates") {
    CampaignSpec spec;
    spec.min_steps = 0;
    spec.target_cycles = 10;

    // Forced regime: 1/F dominates.
    CampaignPoint forced{100, 1.0, 1e-4, 1};
    CHECK(spec.budget_for(forced) == doctest::Approx(10.0 / 1e-4).epsilon(0.01));

    // Scaling regime: sqrt(pi M / (2 F K)) dominates.
    CampaignPoint scaling{10000, 0.99, 0.01, 1};
    const double expect = 10.0 * std::sqrt(std::numbers::pi * 10000.0 / (2.0 * 0.01 * 0.99));
    CHECK(spec.budget_for(scaling) == doctest::Approx(expect).epsilon(0.01));

    spec.step_cap = 1000;
    CHECK(spec.budget_for(scaling) == 1000);
    spec.explicit_steps = 555;
    CHECK(spec.budget_for(scaling) == 555);
}

TEST_CASE("campaign runs, resumes, and keeps a complete manifest") {
    TempDir tmp;
    CampaignSpec spec;
    spec.grid = {{200, 0.99, 0.01, 1}, {200, 0.9, 0.1, 1}};
    spec.replicas = 2;
    spec.master_seed = 11;
    spec.explicit_steps = 30000;
    spec.min_steps = 1;
    spec.heatmap_bins = 20;
    spec.out_dir = (tmp.path / "camp").string();

    const auto first = run_campaign(spec, 2);
    CHECK_FALSE(first.any_failed);
    CHECK(first.skipped == 0);
    REQUIRE(first.points.size() == 2);
    CHECK(first.points[0].n_cycles > 0);

    const auto scaling_digest = io::file_digest(fs::path(spec.out_dir) / "scaling.csv");

    // Second run restores both points from the manifest without recomputing.
    const auto second = run_campaign(spec, 2);
    CHECK(second.skipped == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(second.points[i].mean_tr == first.points[i].mean_tr);
        CHECK(second.points[i].cyclicity == first.points[i].cyclicity);
    }
    CHECK(io::file_digest(fs::path(spec.out_dir) / "scaling.csv") == scaling_digest);

    // A changed grid invalidates the stored point.
    auto changed = spec;
    changed.grid[1].f_hat = 0.2;
    changed.grid[1].k_hat = 0.8;
    const auto third = run_campaign(changed, 2);
    CHECK(third.skipped == 1);

    // Every emitted file appears in the manifest with its digest.
    const auto manifest = io::read_text_file(fs::path(spec.out_dir) / "manifest.json");
    for (const auto& entry : fs::directory_iterator(spec.out_dir)) {
        if (entry.path().filename() == "manifest.json") continue;
        CHECK(manifest.find(entry.path().filename().string()) != std::string::npos);
    }
}

TEST_CASE("occupancy maps broaden at small M and collapse at large M") {
    auto visited_fraction = [](std::uint64_t mass, double f_hat) {
        SimulationConfig cfg;
        cfg.total_mass = mass;
        cfg.coalescence_rate = 1.0 - f_hat;
        cfg.fragmentation_rate = f_hat;
        cfg.seed = 77;
        cfg.max_steps = 400000;
        cfg.sample_interval = 4;
        const auto traj = run(cfg);
        const auto map = make_heatmap(traj.samples, mass, 100, 100);
        std::size_t visited = 0;
        for (auto c : map.counts)
            if (c > 0) ++visited;
        return static_cast<double>(visited) / static_cast<double>(map.counts.size());
    };
    const double broad = visited_fraction(300, 1e-3);
    const double collapsed = visited_fraction(30000, 1e-1);
    CHECK(broad > 5.0 * collapsed);
    CHECK(collapsed < 0.02);
    CHECK(broad > 0.10);
}

TEST_CASE("campaign results are worker-count invariant") {
    TempDir tmp;
    CampaignSpec spec;
    spec.grid = {{150, 0.99, 0.01, 1}, {150, 0.5, 0.5, 1}, {300, 0.99, 0.01, 1}};
    spec.replicas = 3;
    spec.master_seed = 5;
    spec.explicit_steps = 20000;
    spec.heatmaps = false;

    spec.out_dir = (tmp.path / "w1").string();
    const auto serial = run_campaign(spec, 1);
    spec.out_dir = (tmp.path / "w4").string();
    const auto parallel = run_campaign(spec, 4);
    REQUIRE(serial.points.size() == parallel.points.size());
    for (std::size_t i = 0; i < serial.points.size(); ++i) {
        CHECK(serial.points[i].mean_tr == parallel.points[i].mean_tr);
        CHECK(serial.points[i].cyclicity == parallel.points[i].cyclicity);
        CHECK(serial.points[i].n_cycles == parallel.points[i].n_cycles);
    }
    CHECK(io::file_digest(fs::path(tmp.path) / "w1" / "scaling.csv") ==
          io::file_digest(fs::path(tmp.path) / "w4" / "scaling.csv"));
}
