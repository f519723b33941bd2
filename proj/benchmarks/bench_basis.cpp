#include <benchmark/benchmark.h>

#include <vector>

#include <ratjac/mapping.hpp>

using namespace ratjac;

static void BM_KernelEval(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const Kernel k = state.range(1) == 0 ? Kernel::legendre() : Kernel::chebyshev();
    std::vector<double> v(m), d1(m), d2(m);
    double t = -0.93;
    for (auto _ : state) {
        eval_kernel_into(k, t, v, d1, d2);
        benchmark::DoNotOptimize(v.data());
        t = t > 0.9 ? -0.93 : t + 1e-3;
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(m));
}
BENCHMARK(BM_KernelEval)->ArgsProduct({{10, 40, 160}, {0, 1}});

static void BM_RationalEval(benchmark::State& state) {
    const auto kind = static_cast<MappingKind>(state.range(0));
    const RationalBasis b{Kernel::legendre(), Mapping(kind, 2.0), 40};
    double x = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_rational(b, x));
        x = x > 50.0 ? 0.01 : x * 1.01;
    }
}
BENCHMARK(BM_RationalEval)->DenseRange(0, 2);

static void BM_Roots(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(roots(Kernel::legendre(), n));
}
BENCHMARK(BM_Roots)->Arg(25)->Arg(40)->Arg(100);
