#include <benchmark/benchmark.h>

#include "gelshatter/engine.hpp"

using namespace gelshatter;

static void BM_StepThroughput(benchmark::State& state) {
    SimulationConfig cfg;
    cfg.total_mass = static_cast<std::uint64_t>(state.range(0));
    cfg.coalescence_rate = 0.99;
    cfg.fragmentation_rate = 0.01;
    cfg.seed = 3;
    cfg.max_steps = 1;
    ClusterPopulation pop(cfg.total_mass);
    auto rng = make_engine(cfg.seed);
    for (auto _ : state) benchmark::DoNotOptimize(step(pop, cfg, rng));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StepThroughput)->Arg(1000)->Arg(100000)->Arg(1000000);

static void BM_RunWithSampling(benchmark::State& state) {
    SimulationConfig cfg;
    cfg.total_mass = 100000;
    cfg.coalescence_rate = 0.99;
    cfg.fragmentation_rate = 0.01;
    cfg.seed = 4;
    cfg.max_steps = 200000;
    cfg.sample_interval = 1000;
    for (auto _ : state) benchmark::DoNotOptimize(run(cfg));
    state.SetItemsProcessed(state.iterations() * cfg.max_steps);
}
BENCHMARK(BM_RunWithSampling)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
