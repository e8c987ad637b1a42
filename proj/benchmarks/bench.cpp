#include "blowuplab/operators.hpp"
#include "blowuplab/quadrature.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace blowuplab;

static void BM_PLaplacianApply1D(benchmark::State& state) {
    const Grid grid = build_interval(0.0, M_PI, static_cast<int>(state.range(0)));
    Field u = sample_field(grid, [](double x) { return std::sin(x); });
    apply_dirichlet(u, grid);
    for (auto _ : state)
        benchmark::DoNotOptimize(p_laplacian_apply(u, 3.0, 1e-8, grid));
    state.SetItemsProcessed(state.iterations() * grid.num_nodes());
}
BENCHMARK(BM_PLaplacianApply1D)->Arg(401)->Arg(1601)->Arg(6401);

static void BM_PLaplacianApply2D(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid grid = build_rectangle(0.0, 1.0, 0.0, 1.0, n, n);
    Field u = sample_field(grid, [](double x, double y) {
        return std::sin(M_PI * x) * std::sin(M_PI * y);
    });
    apply_dirichlet(u, grid);
    for (auto _ : state)
        benchmark::DoNotOptimize(p_laplacian_apply(u, 3.0, 1e-8, grid));
    state.SetItemsProcessed(state.iterations() * grid.num_nodes());
}
BENCHMARK(BM_PLaplacianApply2D)->Arg(65)->Arg(129)->Arg(257);

static void BM_Eigenpair(benchmark::State& state) {
    const Grid grid = build_interval(0.0, M_PI, static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(principal_eigenpair(grid, 1e-10));
}
BENCHMARK(BM_Eigenpair)->Arg(201)->Arg(801);

static void BM_AdaptiveQuadrature(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate_adaptive(
            [](double s) { return 1.0 / std::expm1(s); }, 3.0, 50.0));
}
BENCHMARK(BM_AdaptiveQuadrature);

BENCHMARK_MAIN();
