#include <benchmark/benchmark.h>

#include <ratjac/hpo.hpp>

using namespace ratjac;

// One kernel/mapping row of the default grid (100 Kidder solves at m = 25).
static void BM_GridRow(benchmark::State& state) {
    SearchSpace s = SearchSpace::grid_defaults();
    s.kernels = {Kernel::legendre()};
    s.mappings = {MappingKind::Algebraic};
    const auto bm = kidder_benchmark({0.5});
    const auto workers = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_search(s, bm, 25, SolverConfig{}, workers));
}
BENCHMARK(BM_GridRow)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_SampleConfigs(benchmark::State& state) {
    const SearchSpace s = SearchSpace::random_defaults(1);
    for (auto _ : state) benchmark::DoNotOptimize(sample_configs(s));
}
BENCHMARK(BM_SampleConfigs);
BENCHMARK_MAIN();
