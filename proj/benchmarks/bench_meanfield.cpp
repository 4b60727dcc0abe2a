#include <benchmark/benchmark.h>

#include "gelshatter/analysis.hpp"
#include "gelshatter/meanfield.hpp"
#include "gelshatter/rng.hpp"

using namespace gelshatter;

static void BM_MeanfieldRhs(benchmark::State& state) {
    const auto k_cut = static_cast<std::size_t>(state.range(0));
    meanfield::State s = meanfield::State::monomers(k_cut);
    const meanfield::Params params{0.1, 0.9, 1.0};
    s = meanfield::integrate(std::move(s), params, 2.5e-3 * 1000.0 / k_cut, 2.0);
    std::vector<double> dndt;
    for (auto _ : state) {
        meanfield::rhs_into(s.n, params, dndt);
        benchmark::DoNotOptimize(dndt.data());
    }
}
BENCHMARK(BM_MeanfieldRhs)->Arg(200)->Arg(1000);

static void BM_PowerlawFit(benchmark::State& state) {
    auto rng = make_engine(6);
    std::vector<std::pair<std::uint64_t, double>> weighted;
    for (std::uint64_t k = 1; k <= 10000; ++k) {
        const double w = 1e5 * std::pow(static_cast<double>(k), -2.5);
        if (w >= 0.5) weighted.emplace_back(k, w);
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(analysis::fit_truncated_powerlaw(weighted, 1, 10000));
}
BENCHMARK(BM_PowerlawFit);

BENCHMARK_MAIN();
