#include <benchmark/benchmark.h>

#include "liouville/evolution.hpp"
#include "liouville/generate.hpp"
#include "liouville/grid.hpp"
#include "liouville/riesz.hpp"
#include "liouville/spectral.hpp"
#include "liouville/weakform.hpp"

using namespace liouville;

namespace {

Grid grid_for(int n) { return Grid(2, n, 16.0); }

VectorField field_for(const Grid& grid) {
    GeneratorSpec spec;
    spec.shape = "x1";
    return gen_divfree(spec, grid);
}

void BM_transform_roundtrip(benchmark::State& state) {
    const Grid grid = grid_for(static_cast<int>(state.range(0)));
    GeneratorSpec spec;
    const ScalarField f = gen_vorticity2d(spec, grid);
    for (auto _ : state) {
        ScalarField back = from_spectral(to_spectral(f));
        benchmark::DoNotOptimize(back.values().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.size()));
}
BENCHMARK(BM_transform_roundtrip)->Arg(128)->Arg(256)->Arg(512);

void BM_pressure(benchmark::State& state) {
    const Grid grid = grid_for(static_cast<int>(state.range(0)));
    const VectorField v = field_for(grid);
    for (auto _ : state) {
        SpectralField phat = pressure_spectral(v);
        benchmark::DoNotOptimize(phat.coeffs().data());
    }
}
BENCHMARK(BM_pressure)->Arg(128)->Arg(256);

void BM_pv_estimate(benchmark::State& state) {
    const Grid grid = grid_for(static_cast<int>(state.range(0)));
    const VectorField v = field_for(grid);
    const SpectralField phat = pressure_spectral(v);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pv_from_balls(phat, 0.15 * grid.length(), 0.45 * grid.length()));
    }
}
BENCHMARK(BM_pv_estimate)->Arg(256);

void BM_ledger_row(benchmark::State& state) {
    const Grid grid = grid_for(static_cast<int>(state.range(0)));
    const VectorField v = field_for(grid);
    const ScalarField p = compute_pressure(v);
    for (auto _ : state) {
        auto terms = weakform_terms_diag(v, p, 0, 3.0);
        benchmark::DoNotOptimize(terms.data());
    }
}
BENCHMARK(BM_ledger_row)->Arg(128)->Arg(256);

void BM_ns2d_step(benchmark::State& state) {
    const Grid grid = grid_for(static_cast<int>(state.range(0)));
    GeneratorSpec spec;
    spec.shape = "x4";
    spec.amplitude = 0.25;
    FlowState flow{gen_vorticity2d(spec, grid), 0.0, 0.01};
    for (auto _ : state) {
        flow = ns2d_step(flow, 0.01);
        benchmark::DoNotOptimize(flow.omega.values().data());
    }
}
BENCHMARK(BM_ns2d_step)->Arg(128)->Arg(256);

void BM_nudft_point(benchmark::State& state) {
    const Grid grid = grid_for(256);
    GeneratorSpec spec;
    const ScalarField f = gen_vorticity2d(spec, grid);
    double t = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(nudft(f, {t, 0.05, 0.0}));
        t += 1e-6;
    }
}
BENCHMARK(BM_nudft_point);

}  // namespace

BENCHMARK_MAIN();
