#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "gelshatter/observables.hpp"
#include "gelshatter/rng.hpp"

using namespace gelshatter;

namespace {

SizeHistogram hist(std::uint64_t mass, std::map<std::uint64_t, std::uint64_t> counts) {
    SizeHistogram h;
    h.total_mass = mass;
    h.counts = std::move(counts);
    return h;
}

}  // namespace

TEST_CASE("ccdf counts clusters strictly larger than each size") {
    const auto single = ccdf(hist(3, {{1, 3}}));
    REQUIRE(single.size() == 1);
    CHECK(single[0] == std::pair<std::uint64_t, std::uint64_t>{1, 0});

    const auto two = ccdf(hist(8, {{1, 3}, {5, 1}}));
    REQUIRE(two.size() == 2);
    CHECK(two[0] == std::pair<std::uint64_t, std::uint64_t>{1, 1});
    CHECK(two[1] == std::pair<std::uint64_t, std::uint64_t>{5, 0});

    CHECK_THROWS_AS(ccdf(SizeHistogram{}), std::invalid_argument);
}

TEST_CASE("ccdf is non-increasing on random histograms") {
    auto rng = make_engine(1);
    for (int trial = 0; trial < 50; ++trial) {
        SizeHistogram h;
        for (int i = 0; i < 20; ++i) {
            const std::uint64_t size = 1 + uniform_below(rng, 50);
            const std::uint64_t count = 1 + uniform_below(rng, 5);
            h.counts[size] += count;
        }
        for (const auto& [s, c] : h.counts) h.total_mass += s * c;
        const auto out = ccdf(h);
        for (std::size_t i = 1; i < out.size(); ++i) CHECK(out[i].second <= out[i - 1].second);
        CHECK(out.back().second == 0);
    }
}

TEST_CASE("mean cluster density averages with absent sizes as zero") {
    const auto one = hist(8, {{2, 4}});
    const auto other = hist(8, {{1, 8}});

    const std::vector<SizeHistogram> single{one};
    auto m = mean_cluster_density(single);
    CHECK(m.at(2) == doctest::Approx(4.0));

    const std::vector<SizeHistogram> both{one, other};
    m = mean_cluster_density(both);
    CHECK(m.at(2) == doctest::Approx(2.0));
    CHECK(m.at(1) == doctest::Approx(4.0));

    const std::vector<SizeHistogram> mixed{one, hist(9, {{9, 1}})};
    CHECK_THROWS_AS(mean_cluster_density(mixed), std::invalid_argument);
}

TEST_CASE("heatmap bins normalised coordinates with 1.0 in the last bin") {
    const std::uint64_t mass = 100;
    std::vector<TrajectorySample> monomers{{0, 100, 1}, {1, 100, 1}};
    auto map = make_heatmap(monomers, mass, 10, 10);
    CHECK(map.at(0, 9) == 2);  // k_max/M ~ 0, N/M = 1
    CHECK(map.total() == 2);

    std::vector<TrajectorySample> gel{{0, 1, 100}};
    map = make_heatmap(gel, mass, 10, 10);
    CHECK(map.at(9, 0) == 1);  // k_max/M = 1, N/M ~ 0
    CHECK(map.visited(9, 0));
    CHECK_FALSE(map.visited(0, 0));

    CHECK_THROWS_AS(make_heatmap(gel, mass, 1, 10), std::invalid_argument);
}

TEST_CASE("heatmap tallies conserve the sample count") {
    auto rng = make_engine(3);
    std::vector<TrajectorySample> samples;
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t k = 1 + uniform_below(rng, 100);
        samples.push_back({static_cast<std::uint64_t>(i), 1 + uniform_below(rng, 100), k});
    }
    const auto map = make_heatmap(samples, 100, 17, 23);
    CHECK(map.total() == samples.size());
}

TEST_CASE("recurrence times difference successive largest-cluster shatterings") {
    std::vector<ShatterEvent> events{
        {10, 50, true}, {18, 3, false}, {25, 60, true}, {45, 55, true}};
    const auto tr = recurrence_times(events);
    REQUIRE(tr.size() == 2);
    CHECK(tr[0] == 15);
    CHECK(tr[1] == 20);

    // The leading interval from t = 0 is excluded; one event yields nothing.
    const std::vector<ShatterEvent> one{{10, 50, true}};
    CHECK(recurrence_times(one).empty());

    // Sum telescopes to last minus first qualifying step.
    std::uint64_t sum = 0;
    for (auto t : tr) sum += t;
    CHECK(sum == 45 - 10);
}

TEST_CASE("cycle peaks are the sizes of the shattered largest clusters") {
    std::vector<ShatterEvent> events{{10, 50, true}, {18, 3, false}, {25, 60, true}};
    const auto peaks = cycle_peaks(events);
    CHECK(peaks == std::vector<std::uint64_t>{50, 60});
}

TEST_CASE("cyclicity of monotone and alternating series") {
    std::vector<std::uint64_t> rising{1, 2, 3, 4, 5};
    CHECK(cyclicity(rising) == doctest::Approx(1.0));

    std::vector<std::uint64_t> alternating{2, 3, 2, 3, 2};
    CHECK(cyclicity(alternating) == doctest::Approx(0.0));

    std::vector<std::uint64_t> flat{4, 4, 4};
    CHECK(cyclicity(flat) == doctest::Approx(0.0));

    std::vector<std::uint64_t> tiny{7};
    CHECK_THROWS_AS(cyclicity(tiny), std::invalid_argument);
}

TEST_CASE("cyclicity is bounded and antisymmetric under reversal") {
    auto rng = make_engine(17);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::uint64_t> series{50};
        for (int i = 0; i < 200; ++i) {
            const std::uint64_t prev = series.back();
            const int move = static_cast<int>(uniform_below(rng, 3)) - 1;
            series.push_back(prev + (move > 0 ? 1 : 0) - (move < 0 && prev > 1 ? 1 : 0));
        }
        const double k = cyclicity(series);
        CHECK(k >= -1.0);
        CHECK(k <= 1.0);
        auto reversed = series;
        std::reverse(reversed.begin(), reversed.end());
        CHECK(cyclicity(reversed) == doctest::Approx(-k));
    }
}

TEST_CASE("cyclicity agrees between tallies, sign log, and series") {
    SimulationConfig cfg;
    cfg.total_mass = 200;
    cfg.coalescence_rate = 0.9;
    cfg.fragmentation_rate = 0.1;
    cfg.seed = 4;
    cfg.max_steps = 20000;
    cfg.sample_interval = 1;
    cfg.record_delta_signs = true;
    const auto traj = run(cfg);

    const double from_counts = cyclicity(traj);
    const double from_signs = cyclicity(traj.delta_signs);
    const double from_series = cyclicity_from_samples(traj);
    CHECK(from_counts == doctest::Approx(from_signs));
    CHECK(from_counts == doctest::Approx(from_series));

    auto strided = traj;
    strided.config.sample_interval = 10;
    CHECK_THROWS_AS(cyclicity_from_samples(strided), std::invalid_argument);
}

TEST_CASE("mean density accumulator matches the batch computation") {
    std::vector<SizeHistogram> hists{hist(8, {{2, 4}}), hist(8, {{1, 8}}),
                                     hist(8, {{1, 2}, {3, 2}})};
    MeanDensityAccumulator acc;
    for (const auto& h : hists) acc.add(h);
    CHECK(acc.mean() == mean_cluster_density(hists));
    CHECK(acc.count() == 3);
}

TEST_CASE("real-valued ccdf") {
    std::map<std::uint64_t, double> density{{1, 2.5}, {4, 1.0}, {9, 0.5}};
    const auto out = ccdf(density);
    REQUIRE(out.size() == 3);
    CHECK(out[0].second == doctest::Approx(1.5));
    CHECK(out[1].second == doctest::Approx(0.5));
    CHECK(out[2].second == doctest::Approx(0.0));
}
