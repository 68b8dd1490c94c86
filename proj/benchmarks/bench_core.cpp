#include <benchmark/benchmark.h>

#include <vector>

#include "crowdyn/chain_oracle.hpp"
#include "crowdyn/observables.hpp"
#include "crowdyn/spectral.hpp"
#include "crowdyn/volterra.hpp"

namespace {

using namespace crowdyn;

ModelParams params(double eta = 1.5) {
    ModelParams p;
    p.eta = eta;
    p.temperature = 5.0;
    return p;
}

// Grid over 60/ξ₀ with the requested number of steps.
TimeGrid grid(const ModelParams& p, std::size_t n_steps) { return TimeGrid{60.0 / p.xi0, n_steps}; }

void BM_TabulateKernels(benchmark::State& state) {
    const auto p = params();
    const auto g = grid(p, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(tabulate_kernels(p, g));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TabulateKernels)->Arg(1500)->Arg(3000)->Arg(6000)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oN);

void BM_SolveU(benchmark::State& state) {
    const auto p = params();
    const auto g = grid(p, static_cast<std::size_t>(state.range(0)));
    const auto k = tabulate_kernels(p, g);
    for (auto _ : state) benchmark::DoNotOptimize(solve_u(p, g, k));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveU)->Arg(1500)->Arg(3000)->Arg(6000)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNSquared);

void BM_ComputeV(benchmark::State& state) {
    const auto p = params();
    const auto g = grid(p, static_cast<std::size_t>(state.range(0)));
    const auto k = tabulate_kernels(p, g);
    const auto u = solve_u(p, g, k);
    for (auto _ : state) benchmark::DoNotOptimize(compute_v(u, k, g));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ComputeV)->Arg(1500)->Arg(3000)->Arg(6000)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNSquared);

void BM_Simulate(benchmark::State& state) {
    const auto p = params();
    const auto g = grid(p, 6000);
    for (auto _ : state) benchmark::DoNotOptimize(simulate(p, g));
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);

void BM_ChainOracle(benchmark::State& state) {
    const auto p = params();
    const ChainSpec spec{static_cast<std::size_t>(state.range(0)), 0.8};
    std::vector<double> times;
    for (int j = 0; j <= 600; ++j) times.push_back(0.1 * j / p.xi0);
    for (auto _ : state) {
        const ChainPropagator oracle(p, spec);
        benchmark::DoNotOptimize(oracle.propagator(times));
        benchmark::DoNotOptimize(oracle.thermal_v(times));
    }
}
BENCHMARK(BM_ChainOracle)->Arg(150)->Arg(300)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_DensityMatrix(benchmark::State& state) {
    const std::size_t n_max = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(density_matrix(cplx{1.5, 0.5}, 2.0, n_max));
}
BENCHMARK(BM_DensityMatrix)->Arg(64)->Arg(128)->Arg(256);

} // namespace

BENCHMARK_MAIN();
