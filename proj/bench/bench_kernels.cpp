// Serial reference vs OpenMP kernels.

#include "excon/linear.hpp"
#include "excon/oracle.hpp"
#include "excon/tie_breaking.hpp"
#include "excon/weitzman.hpp"

#include <benchmark/benchmark.h>

using namespace excon;

namespace {

Execution mode(const benchmark::State& state) {
    return state.range(0) ? Execution::Parallel : Execution::Serial;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void BM_simulate(benchmark::State& state) {
    const Instance in = gen_random(8, 4, 1, InstanceKind::General);
    const Contract c = Contract::linear(in, 0.3);
    const ResolvedPolicy policy = optimal_policy(in, c);
    const auto trials = static_cast<std::uint64_t>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(simulate(in, c, policy, trials, 7, mode(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trials));
    label(state);
}
BENCHMARK(BM_simulate)->ArgsProduct({{0, 1}, {100000, 1000000}})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_lex_dp(benchmark::State& state) {
    const Instance in = gen_random(static_cast<std::size_t>(state.range(1)), 3, 2, InstanceKind::General);
    const Contract c = Contract::linear(in, 0.2);
    for (auto _ : state) benchmark::DoNotOptimize(lex_dp(in, c, mode(state)));
    label(state);
}
BENCHMARK(BM_lex_dp)->ArgsProduct({{0, 1}, {8, 10, 12}})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_optimal_linear(benchmark::State& state) {
    const Instance in = gen_random(static_cast<std::size_t>(state.range(1)), 4, 3, InstanceKind::General);
    for (auto _ : state) benchmark::DoNotOptimize(optimal_linear(in, mode(state)));
    label(state);
}
BENCHMARK(BM_optimal_linear)->ArgsProduct({{0, 1}, {10, 40}})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_alpha_sweep(benchmark::State& state) {
    const Instance in = gen_random(20, 4, 4, InstanceKind::General);
    for (auto _ : state) benchmark::DoNotOptimize(alpha_sweep(in, 1e-3, mode(state)));
    label(state);
}
BENCHMARK(BM_alpha_sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
