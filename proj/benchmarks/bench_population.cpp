#include <benchmark/benchmark.h>

#include "gelshatter/population.hpp"

using namespace gelshatter;

namespace {

ClusterPopulation dimer_population(std::uint64_t mass, std::uint64_t n_dimers) {
    SizeHistogram h;
    h.total_mass = mass;
    h.counts[2] = n_dimers;
    h.counts[1] = mass - 2 * n_dimers;
    return ClusterPopulation::from_histogram(h);
}

}  // namespace

static void BM_SampleEntry(benchmark::State& state) {
    auto pop = dimer_population(1 << 21, 1ull << static_cast<unsigned>(state.range(0)));
    auto rng = make_engine(1);
    for (auto _ : state) benchmark::DoNotOptimize(pop.sample_entry(rng));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleEntry)->Arg(8)->Arg(12)->Arg(16)->Arg(19);

static void BM_MergeShatterCycle(benchmark::State& state) {
    auto pop = dimer_population(1 << 21, 1ull << static_cast<unsigned>(state.range(0)));
    auto rng = make_engine(2);
    for (auto _ : state) {
        const auto a = pop.sample_entry(rng);
        const auto b = pop.sample_entry(rng);
        const auto out = pop.merge_entries(a, b);
        if (out.kind == EventOutcome::Kind::Coalesced) pop.shatter_entry({out.size, 0});
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MergeShatterCycle)->Arg(8)->Arg(12)->Arg(16)->Arg(19);

static void BM_HistogramExtraction(benchmark::State& state) {
    auto pop = dimer_population(1 << 21, 1 << 16);
    for (auto _ : state) benchmark::DoNotOptimize(pop.histogram());
}
BENCHMARK(BM_HistogramExtraction);

BENCHMARK_MAIN();
