#include "pulsearea/analysis.hpp"
#include "pulsearea/solver.hpp"

#include <benchmark/benchmark.h>

using namespace pulsearea;

static void BM_Quadrature(benchmark::State& state) {
    const double lambda = static_cast<double>(state.range(0)) / 100.0;
    const auto p = make_params(0.5, lambda);
    const auto c = default_config(lambda);
    for (auto _ : state) benchmark::DoNotOptimize(solve_trajectory(p, c, Method::quadrature));
}
BENCHMARK(BM_Quadrature)->Arg(0)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_Ivp(benchmark::State& state) {
    const double lambda = static_cast<double>(state.range(0)) / 100.0;
    const auto p = make_params(0.5, lambda);
    const auto c = default_config(lambda);
    for (auto _ : state) benchmark::DoNotOptimize(solve_trajectory(p, c, Method::ivp));
}
BENCHMARK(BM_Ivp)->Arg(0)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_AuditReport(benchmark::State& state) {
    const auto p = make_params(0.5, 0.5);
    const auto c = default_config(0.5);
    for (auto _ : state) benchmark::DoNotOptimize(build_audit_report(p, c));
}
BENCHMARK(BM_AuditReport)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
