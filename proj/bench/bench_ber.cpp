// Serial reference vs OpenMP trial loop on the 128x16 configuration.

#include "gmdhp/link_sim.hpp"

#include <benchmark/benchmark.h>

using namespace gmdhp;

namespace {

SimConfig bench_config(int channels)
{
    SimConfig cfg;
    cfg.n_s = 2;
    cfg.channels_per_point = channels;
    cfg.symbols_per_channel = 100;
    return cfg;
}

void BM_serial(benchmark::State& state)
{
    const SimConfig cfg = bench_config(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(run_ber_point_serial(cfg, Scheme::gmd_hybrid, -4.0));
    state.SetItemsProcessed(state.iterations() * cfg.channels_per_point);
}

void BM_openmp(benchmark::State& state)
{
    const SimConfig cfg = bench_config(static_cast<int>(state.range(0)));
    RunOptions opts;
    opts.threads = static_cast<int>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(run_ber_point(cfg, Scheme::gmd_hybrid, -4.0, opts));
    state.SetItemsProcessed(state.iterations() * cfg.channels_per_point);
}

}  // namespace

BENCHMARK(BM_serial)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_openmp)->Args({64, 1})->Args({64, 2})->Args({64, 4})->Args({64, 8})
    ->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
