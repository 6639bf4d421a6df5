// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <vector>

#include "dynkin/engine.hpp"
#include "dynkin/kernels.hpp"

namespace {

using namespace dynkin;

kernels::TrinomialChain make_chain(std::size_t n) {
    kernels::TrinomialChain chain;
    chain.up.assign(n, 0.3);
    chain.mid.assign(n, 0.45);
    chain.down.assign(n, 0.25);
    chain.discount = 0.9999;
    return chain;
}

template <bool Parallel>
void BM_BellmanSweep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto chain = make_chain(n);
    std::vector<double> payoff(n), current(n), next(n);
    for (std::size_t i = 0; i < n; ++i) {
        payoff[i] = std::max(0.0, static_cast<double>(i) / static_cast<double>(n) - 0.3);
        current[i] = payoff[i] + 0.01;
    }
    for (auto _ : state) {
        const double change = Parallel ? kernels::bellman_sweep_omp(chain, payoff, current, next)
                                       : kernels::bellman_sweep_serial(chain, payoff, current, next);
        benchmark::DoNotOptimize(change);
        std::swap(current, next);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <bool Parallel>
void BM_SimulateOutcomes(benchmark::State& state) {
    const GbmModel model(0.0, 0.2, 0.04, 1.0);
    const ValueOracle oracle = ValueOracle::closed_form(model);
    const EquilibriumProfile profile = build_profile(oracle, 0.15, 0.15, 1.5);
    SimConfig config;
    config.n_paths = static_cast<std::uint64_t>(state.range(0));
    config.mode = SimMode::path;
    for (auto _ : state) {
        auto out = Parallel ? simulate_outcomes(oracle, profile, config)
                            : simulate_outcomes_serial(oracle, profile, config);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_BellmanSweep<false>)->Name("bellman_sweep/serial")->Arg(301)->Arg(100001);
BENCHMARK(BM_BellmanSweep<true>)->Name("bellman_sweep/omp")->Arg(301)->Arg(100001);
BENCHMARK(BM_SimulateOutcomes<false>)->Name("simulate_outcomes/serial")->Arg(10000);
BENCHMARK(BM_SimulateOutcomes<true>)->Name("simulate_outcomes/omp")->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
