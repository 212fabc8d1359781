#include "surplus/claims.hpp"
#include "surplus/model.hpp"
#include "surplus/simulator.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>

namespace {

using namespace surplus;

ModelParams base_model() {
    return ModelParams{2.0, 0.1, 2.0, 1.0, PremiumSpec::quadratic(2.0, 0.0, 1.0), ClaimDistribution::exponential(1.0)};
}

void BM_SimulatePath(benchmark::State& state) {
    const ModelParams params = base_model();
    SimControls controls = default_controls(params);
    controls.scheme = state.range(0) == 0 ? Scheme::EulerLog : Scheme::EulerDirect;
    std::uint64_t index = 0;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_path(params, controls, index++));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SimulatePath)->Arg(0)->Arg(1);

void BM_EstimateRuin(benchmark::State& state) {
    const ModelParams params = base_model();
    SimControls controls = default_controls(params);
    controls.n_paths = state.range(0);
    controls.workers = 1;
    for (auto _ : state) benchmark::DoNotOptimize(estimate_ruin(params, controls));
    state.SetItemsProcessed(state.iterations() * controls.n_paths);
}
BENCHMARK(BM_EstimateRuin)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_DiffusionPath(benchmark::State& state) {
    const DriftSpec drift{PremiumSpec::quadratic(0.0, 0.0, 1.0), 0.0};
    const double x = 0.5;
    SimControls controls = default_diffusion_controls(drift, 1.0, x);
    std::uint64_t index = 0;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_diffusion_path(drift, 1.0, x, 1e-6 * x, controls, index++));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DiffusionPath);

}  // namespace
