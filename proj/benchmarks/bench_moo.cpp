#include <benchmark/benchmark.h>

#include <pilotfeas/hypotheses.hpp>
#include <pilotfeas/moo.hpp>
#include <pilotfeas/pc_comparator.hpp>
#include <pilotfeas/trial_model.hpp>

using namespace pilotfeas;

namespace {

DefinitiveDesign design() { return {514, 1000, 0.3, 1.0}; }

} // namespace

static void BM_ErrorRatesAt(benchmark::State& state) {
    const auto d = design();
    const auto h = make_hypotheses(d, 0.65, 0.8);
    for (auto _ : state)
        benchmark::DoNotOptimize(error_rates_at(d, h, state.range(0), 2.6422));
}
BENCHMARK(BM_ErrorRatesAt)->Arg(30)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_PcErrorRates(benchmark::State& state) {
    const auto d = design();
    const auto h = make_hypotheses(d, 0.65, 0.8);
    const ThresholdTriple t{0.705, 0.865, 0.373};
    for (auto _ : state)
        benchmark::DoNotOptimize(pc_error_rates(d, h, state.range(0), t));
}
BENCHMARK(BM_PcErrorRates)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_PcFrontier(benchmark::State& state) {
    const auto d = design();
    const auto h = make_hypotheses(d, 0.65, 0.8);
    for (auto _ : state)
        benchmark::DoNotOptimize(pc_frontier(d, h, state.range(0)));
}
BENCHMARK(BM_PcFrontier)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_ParetoFrontierSmall(benchmark::State& state) {
    // Scaled-down optimizer run; the default-settings frontier is the
    // acceptance suite's job, not a benchmark loop's.
    const auto d = design();
    const auto h = make_hypotheses(d, 0.65, 0.8);
    MooSettings ms;
    ms.population = 24;
    ms.generations = state.range(0);
    ms.seed = 7;
    for (auto _ : state)
        benchmark::DoNotOptimize(pareto_frontier(d, h, 30, ms));
}
BENCHMARK(BM_ParetoFrontierSmall)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_SolveCForBeta(benchmark::State& state) {
    const auto d = design();
    const auto h = make_hypotheses(d, 0.65, 0.8);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_c_for_beta(d, h, 30, 0.1));
}
BENCHMARK(BM_SolveCForBeta)->Unit(benchmark::kMillisecond);
