#include <benchmark/benchmark.h>

#include "steklov/analysis.hpp"
#include "steklov/bie.hpp"
#include "steklov/disk.hpp"
#include "steklov/reconstruction.hpp"

using namespace steklov;

static void BM_AssembleKite(benchmark::State& st) {
    const auto kite = AnalyticCurve::kite();
    for (auto _ : st) benchmark::DoNotOptimize(assemble(kite, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_AssembleKite)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_SolveEllipse(benchmark::State& st) {
    const auto sys = assemble(AnalyticCurve::ellipse(1.0, 1.01), static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(solve_steklov(sys, Formulation::Regularized, 31));
}
BENCHMARK(BM_SolveEllipse)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_DiskRfe(benchmark::State& st) {
    const auto band = band_coefficients(mobius_approximant(0.8, 20));
    for (auto _ : st) benchmark::DoNotOptimize(disk_eigenvalues(band, static_cast<int>(st.range(0)), 64));
}
BENCHMARK(BM_DiskRfe)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_LambdaRoots(benchmark::State& st) {
    const auto curve = boundary_curve(mobius_approximant(0.8, 20));
    for (auto _ : st) benchmark::DoNotOptimize(lambda_of(curve, {0.8, 0.05}));
}
BENCHMARK(BM_LambdaRoots)->Unit(benchmark::kMicrosecond);

static void BM_LambdaNewtonKite(benchmark::State& st) {
    const auto kite = AnalyticCurve::kite();
    for (auto _ : st) benchmark::DoNotOptimize(lambda_of(kite, {0.1, 0.2}, LambdaMethod::Newton));
}
BENCHMARK(BM_LambdaNewtonKite)->Unit(benchmark::kMicrosecond);

static void BM_ShiftedCoefficients(benchmark::State& st) {
    const auto ell = AnalyticCurve::ellipse(2.0, 1.0);
    const Point2 x{0.3, 0.2};
    const auto lam = lambda_of(ell, x);
    const int n_max = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(b_coefficients(ell, x, 0.8 * lam.lambda, n_max, &lam));
}
BENCHMARK(BM_ShiftedCoefficients)->Arg(64)->Arg(200)->Arg(800)->Unit(benchmark::kMicrosecond);

static void BM_MapFieldGrid(benchmark::State& st) {
    const auto map = mobius_approximant(0.8, 20);
    const auto spec = solve_disk(band_coefficients(map), 256, 20);
    for (auto _ : st)
        benchmark::DoNotOptimize(map_field_grid(map, spec.vectors[16], Box{0.65, 0.95, -0.15, 0.15}, 128));
}
BENCHMARK(BM_MapFieldGrid)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
