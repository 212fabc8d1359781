#include "surplus/bounds.hpp"
#include "surplus/claims.hpp"
#include "surplus/model.hpp"
#include "surplus/scale_analysis.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace surplus;

DriftSpec quadratic_drift(double c0) { return DriftSpec{PremiumSpec::quadratic(c0, 0.0, 1.0), 0.1}; }

ModelParams base_model() {
    return ModelParams{2.0, 0.1, 2.0, 1.0, PremiumSpec::quadratic(2.0, 0.0, 1.0), ClaimDistribution::exponential(1.0)};
}

void BM_ExplosionProbability(benchmark::State& state) {
    // p0 = 0 with 2 p1 / b^2 < 1 takes the incomplete-gamma branch; p0 > 0 is certain.
    const DriftSpec drift = quadratic_drift(state.range(0) == 0 ? 0.0 : 1.0);
    double x = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(explosion_probability(drift, 1.5, x));
        x = x < 4.0 ? x + 0.01 : 0.5;
    }
}
BENCHMARK(BM_ExplosionProbability)->Arg(0)->Arg(1);

void BM_ExpectedExitTime(benchmark::State& state) {
    const DriftSpec drift{PremiumSpec::quadratic(1.0, 0.0, 1.0), 0.0};
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(expected_exit_time(drift, 1.0, n, 1.0));
}
BENCHMARK(BM_ExpectedExitTime)->Arg(4)->Arg(10);

void BM_ScaleIntegralI1(benchmark::State& state) {
    const DriftSpec drift{PremiumSpec::linear(1.0, 3.0), 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(scale_integral_i1(drift, 2.0, 1.0));
}
BENCHMARK(BM_ScaleIntegralI1);

void BM_ClassifyBoundary(benchmark::State& state) {
    const DriftSpec drift = quadratic_drift(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(classify_boundary(drift, 2.0, 1.0));
}
BENCHMARK(BM_ClassifyBoundary);

void BM_SolveR0(benchmark::State& state) {
    const ClaimDistribution claims = state.range(0) == 0 ? ClaimDistribution::exponential(1.0)
                                                         : ClaimDistribution::gamma(2.0, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(solve_r0(claims, 1.0, 2.0));
}
BENCHMARK(BM_SolveR0)->Arg(0)->Arg(1);

void BM_ComputeBound(benchmark::State& state) {
    ModelParams params = base_model();
    params.b = state.range(0) == 0 ? 2.0 : 1.0;  // selects condition 1 or the r0 fallback
    for (auto _ : state) benchmark::DoNotOptimize(compute_bound(params));
}
BENCHMARK(BM_ComputeBound)->Arg(0)->Arg(1);

}  // namespace
