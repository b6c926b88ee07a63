#include <benchmark/benchmark.h>

#include <pilotfeas/mc_oracle.hpp>
#include <pilotfeas/pilot_test.hpp>
#include <pilotfeas/trial_model.hpp>
#include <pilotfeas/variance_extension.hpp>

using namespace pilotfeas;

namespace {

DefinitiveDesign design() { return {514, 1000, 0.3, 1.0}; }

} // namespace

static void BM_PilotPower(benchmark::State& state) {
    const auto d = design();
    const PilotDesign pilot{state.range(0), 2.6422};
    const Rates rates{0.5, 0.8, 0.7, 1.0, std::nullopt};
    for (auto _ : state)
        benchmark::DoNotOptimize(static_cast<double>(pilot_power(d, pilot, rates)));
}
BENCHMARK(BM_PilotPower)->Arg(30)->Arg(50)->Arg(70);

static void BM_PilotPowerCorrelated(benchmark::State& state) {
    const auto d = design();
    const PilotDesign pilot{state.range(0), 2.6422, CorrelationMode::correlated};
    const Rates rates{0.5, 0.8, 0.7, 2.0, std::nullopt};
    for (auto _ : state)
        benchmark::DoNotOptimize(static_cast<double>(pilot_power(d, pilot, rates)));
}
BENCHMARK(BM_PilotPowerCorrelated)->Arg(20)->Arg(40);

static void BM_PilotPowerUnknownSigma(benchmark::State& state) {
    const auto d = design();
    const PilotDesign pilot{state.range(0), 2.6422};
    const Rates rates{0.5, 0.8, 0.7, 1.0, 1.0};
    const VarianceConfig cfg{0.8};
    for (auto _ : state)
        benchmark::DoNotOptimize(
            static_cast<double>(pilot_power_unknown_sigma(d, pilot, rates, cfg)));
}
BENCHMARK(BM_PilotPowerUnknownSigma)->Arg(30)->Arg(50);

static void BM_PowerEngineReuse(benchmark::State& state) {
    // Amortized per-point cost once the recruitment classes are cached.
    const auto d = design();
    const PowerEngine engine(d, 50);
    double f = 0.2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            engine.independent_power(2.6422, Rates{0.5, f, 0.7, 1.0, std::nullopt}));
        f += 1e-3;
        if (f > 0.99) f = 0.2;
    }
}
BENCHMARK(BM_PowerEngineReuse);

static void BM_SimulatePilot(benchmark::State& state) {
    const auto d = design();
    const PilotDesign pilot{30, 2.46};
    const Rates rates{0.5, 0.8, 0.7, 1.0, std::nullopt};
    std::uint64_t seed = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            simulate_pilot(d, pilot, rates, SimSettings{state.range(0), seed++}));
}
BENCHMARK(BM_SimulatePilot)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_ExpectedRecruited(benchmark::State& state) {
    const auto d = design();
    double r = 0.2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(expected_recruited(d, r));
        r += 1e-3;
        if (r > 0.99) r = 0.2;
    }
}
BENCHMARK(BM_ExpectedRecruited);
