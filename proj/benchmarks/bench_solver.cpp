#include <benchmark/benchmark.h>

#include <ratjac/problems.hpp>

using namespace ratjac;

static void BM_SolveVolterra(benchmark::State& state) {
    const VolterraParams vp{0.5, 0.1};
    const auto spec = volterra_problem(vp);
    const RationalBasis b{Kernel::chebyshev(), Mapping(MappingKind::Exponential, 3.8),
                          static_cast<std::size_t>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(newton_solve(spec, b, SolverConfig{}));
}
BENCHMARK(BM_SolveVolterra)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_SolveKidder(benchmark::State& state) {
    const auto spec = kidder_problem({0.5});
    const RationalBasis b{Kernel::legendre(), Mapping(MappingKind::Algebraic, 4.8),
                          static_cast<std::size_t>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(newton_solve(spec, b, SolverConfig{}));
}
BENCHMARK(BM_SolveKidder)->Arg(25)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_KktJacobian(benchmark::State& state) {
    const auto spec = volterra_problem({0.5, 0.1});
    const RationalBasis b{Kernel::legendre(), Mapping(MappingKind::Algebraic, 1.0), 40};
    SolverConfig cfg;
    cfg.n_collocation = 40;
    KktState st{std::vector<double>(40, 0.01), 0.0, std::vector<double>(40, 0.0),
                std::vector<double>(40, 0.1), {0.0, 0.0}};
    const auto mode = state.range(0) == 0 ? JacobianMode::Analytic : JacobianMode::FiniteDifference;
    for (auto _ : state) benchmark::DoNotOptimize(kkt_jacobian(spec, b, cfg, st, mode));
}
BENCHMARK(BM_KktJacobian)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
