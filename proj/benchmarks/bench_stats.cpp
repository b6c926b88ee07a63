#include <benchmark/benchmark.h>

#include <pilotfeas/stats.hpp>

using namespace pilotfeas;

static void BM_StdNormalCdf(benchmark::State& state) {
    double z = -4.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(static_cast<double>(stats::std_normal_cdf(z)));
        z += 1e-4;
        if (z > 4.0) z = -4.0;
    }
}
BENCHMARK(BM_StdNormalCdf);

static void BM_StdNormalQuantile(benchmark::State& state) {
    double p = 0.001;
    for (auto _ : state) {
        benchmark::DoNotOptimize(stats::std_normal_quantile(p));
        p += 1e-5;
        if (p > 0.999) p = 0.001;
    }
}
BENCHMARK(BM_StdNormalQuantile);

static void BM_BinomialCdf(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            static_cast<double>(stats::binomial_cdf(n / 3, n, 0.4)));
}
BENCHMARK(BM_BinomialCdf)->Arg(60)->Arg(300)->Arg(2000);

static void BM_NegBinomialQuantile(benchmark::State& state) {
    const std::int64_t r = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(stats::neg_binomial_quantile(0.999, r, 0.65));
}
BENCHMARK(BM_NegBinomialQuantile)->Arg(60)->Arg(140);

static void BM_ChisqCdf(benchmark::State& state) {
    const std::int64_t df = state.range(0);
    double x = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            static_cast<double>(stats::chisq_cdf(x, df)));
        x += 0.25;
        if (x > 3.0 * static_cast<double>(df)) x = 0.5;
    }
}
BENCHMARK(BM_ChisqCdf)->Arg(9)->Arg(59)->Arg(139);

BENCHMARK_MAIN();
