#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "gelshatter/analysis.hpp"
#include "gelshatter/rng.hpp"

using namespace gelshatter;
using namespace gelshatter::analysis;

namespace {

/// Inverse-CDF sampler for the exact discrete truncated power law
/// p(k) proportional to k^-alpha on [1, k_max]. Table-based, independent of
/// the estimator under test.
std::vector<std::pair<std::uint64_t, double>> sample_discrete_powerlaw(
    double alpha, std::uint64_t k_max, std::size_t n, RandomEngine& rng) {
    std::vector<double> cdf(k_max + 1, 0.0);
    double total = 0.0;
    for (std::uint64_t k = 1; k <= k_max; ++k) {
        total += std::pow(static_cast<double>(k), -alpha);
        cdf[k] = total;
    }
    std::vector<std::uint64_t> counts(k_max + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = uniform_unit(rng) * total;
        const auto it = std::lower_bound(cdf.begin() + 1, cdf.end(), u);
        ++counts[static_cast<std::uint64_t>(it - cdf.begin())];
    }
    std::vector<std::pair<std::uint64_t, double>> weighted;
    for (std::uint64_t k = 1; k <= k_max; ++k)
        if (counts[k]) weighted.emplace_back(k, static_cast<double>(counts[k]));
    return weighted;
}

std::vector<double> sample_rayleigh(double sigma, std::size_t n, RandomEngine& rng) {
    std::vector<double> out(n);
    for (auto& x : out) {
        const double u = 1.0 - uniform_unit(rng);  // (0, 1]
        x = sigma * std::sqrt(-2.0 * std::log(u));
    }
    return out;
}

std::vector<double> sample_exponential(double rate, std::size_t n, RandomEngine& rng) {
    std::vector<double> out(n);
    for (auto& x : out) x = -std::log(1.0 - uniform_unit(rng)) / rate;
    return out;
}

}  // namespace

TEST_CASE("generalized harmonic sum matches direct summation on wide windows") {
    for (const double alpha : {1.5, 2.5, 4.0}) {
        double direct = 0.0;
        for (std::uint64_t k = 3; k <= 50000; ++k)
            direct += std::pow(static_cast<double>(k), -alpha);
        const double fast = generalized_harmonic(alpha, 3, 50000);
        CHECK(fast == doctest::Approx(direct).epsilon(1e-12));
    }
    CHECK(generalized_harmonic(2.0, 1, 1) == doctest::Approx(1.0));
}

TEST_CASE("powerlaw MLE recovers a synthetic exponent of 2.5") {
    auto rng = make_engine(1001);
    const auto weighted = sample_discrete_powerlaw(2.5, 10000, 100000, rng);
    const auto fit = fit_truncated_powerlaw(weighted, 1, 10000);
    CHECK(std::abs(fit.alpha - 2.5) < 0.02);
    CHECK(fit.n_samples == doctest::Approx(100000));
}

TEST_CASE("powerlaw MLE error shrinks with sample size") {
    auto rng = make_engine(88);
    double err_small = 0.0, err_large = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
        const auto small = sample_discrete_powerlaw(2.5, 10000, 1000, rng);
        const auto large = sample_discrete_powerlaw(2.5, 10000, 100000, rng);
        err_small += std::abs(fit_truncated_powerlaw(small, 1, 10000).alpha - 2.5);
        err_large += std::abs(fit_truncated_powerlaw(large, 1, 10000).alpha - 2.5);
    }
    CHECK(err_large < err_small);
}

TEST_CASE("powerlaw MLE across the bracket") {
    auto rng = make_engine(7);
    for (const double alpha : {1.5, 3.5, 5.0}) {
        const auto weighted = sample_discrete_powerlaw(alpha, 2000, 200000, rng);
        const auto fit = fit_truncated_powerlaw(weighted, 1, 2000);
        CHECK(std::abs(fit.alpha - alpha) < 0.05);
    }
}

TEST_CASE("powerlaw MLE rejects degenerate inputs") {
    std::vector<std::pair<std::uint64_t, double>> single{{7, 1000.0}};
    CHECK_THROWS_AS(fit_truncated_powerlaw(single, 1, 100), FitError);

    std::vector<std::pair<std::uint64_t, double>> sparse{{1, 10.0}, {2, 5.0}};
    CHECK_THROWS_AS(fit_truncated_powerlaw(sparse, 1, 100, 50.0), FitError);

    SizeHistogram h;
    h.total_mass = 40;
    h.counts = {{2, 20}};
    CHECK_THROWS_AS(fit_truncated_powerlaw(h, 1, 0, 10.0), FitError);
}

TEST_CASE("powerlaw MLE respects the fitting window") {
    auto rng = make_engine(3);
    auto weighted = sample_discrete_powerlaw(2.0, 1000, 50000, rng);
    weighted.emplace_back(5000, 2000.0);  // off-window contamination
    const auto fit = fit_truncated_powerlaw(weighted, 1, 1000);
    CHECK(std::abs(fit.alpha - 2.0) < 0.05);
    CHECK(fit.k_max_fit == 1000);
}

TEST_CASE("exponential MLE closed form") {
    const std::vector<double> equal{4.0, 4.0, 4.0};
    CHECK(fit_exponential(equal).rate == doctest::Approx(0.25));

    const std::vector<double> pair{1.0, 3.0};
    CHECK(fit_exponential(pair).rate == doctest::Approx(0.5));
    CHECK(fit_exponential(pair).mean == doctest::Approx(2.0));

    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(fit_exponential(one), FitError);
    const std::vector<double> bad{1.0, 0.0};
    CHECK_THROWS_AS(fit_exponential(bad), FitError);
}

TEST_CASE("rayleigh MLE closed form and oracle recovery") {
    const std::vector<double> equal{4.0, 4.0};
    CHECK(fit_rayleigh(equal).sigma == doctest::Approx(4.0 / std::sqrt(2.0)));

    auto rng = make_engine(5150);
    const auto samples = sample_rayleigh(5.0, 10000, rng);
    const auto fit = fit_rayleigh(samples);
    CHECK(std::abs(fit.sigma - 5.0) < 0.1);
    CHECK(fit.mean == doctest::Approx(fit.sigma * std::sqrt(std::numbers::pi / 2.0)));
}

TEST_CASE("fits are scale equivariant") {
    auto rng = make_engine(31);
    std::vector<double> samples = sample_exponential(0.7, 500, rng);
    const double l1 = fit_exponential(samples).rate;
    const double s1 = fit_rayleigh(samples).sigma;
    for (auto& x : samples) x *= 10.0;
    CHECK(fit_exponential(samples).rate == doctest::Approx(l1 / 10.0));
    CHECK(fit_rayleigh(samples).sigma == doctest::Approx(s1 * 10.0));
}

TEST_CASE("ks distance basics") {
    // Single sample at the model median.
    const std::vector<double> median{std::log(2.0)};
    CHECK(ks_distance(median, [](double x) { return exponential_cdf(1.0, x); }) ==
          doctest::Approx(0.5));

    // Samples at exact model quantiles i/(n+1).
    const int n = 99;
    std::vector<double> quantiles;
    for (int i = 1; i <= n; ++i)
        quantiles.push_back(-std::log(1.0 - static_cast<double>(i) / (n + 1)));
    const double d =
        ks_distance(quantiles, [](double x) { return exponential_cdf(1.0, x); });
    CHECK(d <= 1.0 / (n + 1) + 1e-12);
}

TEST_CASE("ks distance of a fitted exponential is small") {
    auto rng = make_engine(21);
    const auto samples = sample_exponential(0.3, 10000, rng);
    const auto fit = fit_exponential(samples);
    const double d = ks_distance(
        samples, [&](double x) { return exponential_cdf(fit.rate, x); });
    CHECK(d < 0.02);
}

TEST_CASE("ks distance separates exponential from rayleigh data") {
    auto rng = make_engine(9);
    const auto expo = sample_exponential(1.0, 5000, rng);
    const auto ray = sample_rayleigh(3.0, 5000, rng);

    const auto efit = fit_exponential(expo);
    const auto rfit = fit_rayleigh(expo);
    CHECK(ks_distance(expo, [&](double x) { return exponential_cdf(efit.rate, x); }) <
          ks_distance(expo, [&](double x) { return rayleigh_cdf(rfit.sigma, x); }));

    const auto efit2 = fit_exponential(ray);
    const auto rfit2 = fit_rayleigh(ray);
    CHECK(ks_distance(ray, [&](double x) { return rayleigh_cdf(rfit2.sigma, x); }) <
          ks_distance(ray, [&](double x) { return exponential_cdf(efit2.rate, x); }));
}

TEST_CASE("scaling point fields satisfy their defining identities") {
    const auto p = ScalingPoint::make(1000.0, 0.99, 0.01, 1234.5, 0.3, 42);
    CHECK(p.r == 0.01 * 1000.0 / 0.99);
    CHECK(p.g == 0.01 * 1234.5);
    CHECK(p.n_cycles == 42);
}

TEST_CASE("collapse recovers exact synthetic scaling laws") {
    std::vector<ScalingPoint> points;
    for (const double r : {0.001, 0.002, 0.01, 1.0, 3.0, 10.0, 30.0, 100.0}) {
        ScalingPoint p;
        p.r = r;
        p.g = r >= 1.0 ? std::sqrt(r) : 1.0;
        points.push_back(p);
    }
    const auto summary = collapse(points);
    CHECK(summary.slope == doctest::Approx(0.5));
    CHECK(summary.residual_rms == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(summary.plateau == doctest::Approx(1.0));
    CHECK(summary.n_slope_points == 5);
    CHECK(summary.n_plateau_points == 3);

    std::vector<ScalingPoint> few(points.begin(), points.begin() + 4);
    CHECK_THROWS_AS(collapse(few), std::invalid_argument);
}

TEST_CASE("regime classification with closed middle interval") {
    CHECK(classify_regime(0.01) == Regime::ForcedCycles);
    CHECK(classify_regime(10.0) == Regime::UnforcedGelShatter);
    CHECK(classify_regime(1e4) == Regime::FragmentationDominance);
    // Boundaries belong to the middle regime.
    CHECK(classify_regime(0.1) == Regime::UnforcedGelShatter);
    CHECK(classify_regime(1000.0) == Regime::UnforcedGelShatter);
    CHECK_THROWS_AS(classify_regime(0.0), std::invalid_argument);

    const RegimeThresholds custom{1.0, 100.0};
    CHECK(classify_regime(0.5, custom) == Regime::ForcedCycles);
}

TEST_CASE("largest cluster envelope against the predicted scale") {
    std::vector<std::uint64_t> peaks;
    for (int i = 1; i <= 100; ++i) peaks.push_back(i * 10);
    const auto p = largest_cluster_scale(10000.0, 0.99, 0.001, peaks);
    CHECK(p.r == doctest::Approx(0.001 * 10000.0 / 0.99));
    CHECK(p.envelope == doctest::Approx(900.0));  // 90th percentile
    CHECK(p.predicted == doctest::Approx(10000.0 / std::sqrt(p.r)));
    CHECK(p.ratio == doctest::Approx(p.envelope / p.predicted));
    CHECK(p.in_scaling_regime);

    const auto forced = largest_cluster_scale(100.0, 1.0, 1e-5, peaks);
    CHECK_FALSE(forced.in_scaling_regime);  // flagged, not rejected
}

TEST_CASE("loglog slope helper") {
    std::vector<std::pair<double, double>> xy;
    for (const double x : {1.0, 2.0, 4.0, 8.0}) xy.emplace_back(x, 3.0 * std::pow(x, -0.5));
    CHECK(loglog_slope(xy) == doctest::Approx(-0.5));
}
