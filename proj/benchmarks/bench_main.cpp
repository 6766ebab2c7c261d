#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "folio/allocation.hpp"
#include "folio/engine.hpp"
#include "folio/market_data.hpp"
#include "folio/metrics.hpp"

#include "helpers.hpp"

using namespace folio;

namespace {

std::vector<double> random_curve(std::size_t n) {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> step(0.0005, 0.02);
    std::vector<double> values;
    values.reserve(n);
    double v = 1.0;
    for (std::size_t t = 0; t < n; ++t) {
        v *= std::exp(step(rng));
        values.push_back(v);
    }
    return values;
}

void bm_mdd(benchmark::State& state) {
    const auto values = random_curve(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(metrics::mdd(values));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_mdd)->Arg(1000)->Arg(100000);

void bm_sharpe(benchmark::State& state) {
    const auto values = random_curve(static_cast<std::size_t>(state.range(0)) + 1);
    const auto returns = simple_returns(values);
    for (auto _ : state) {
        benchmark::DoNotOptimize(metrics::sharpe(returns));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_sharpe)->Arg(1000)->Arg(100000);

void bm_hybrid_weights(benchmark::State& state) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> sigma(0.01, 1.0);
    std::uniform_real_distribution<double> sharpe(-3.0, 3.0);
    std::vector<alloc::AssetStats> stats;
    for (std::int64_t i = 0; i < state.range(0); ++i) {
        alloc::AssetStats s;
        s.symbol = "A" + std::to_string(i);
        s.sigma = sigma(rng);
        s.sharpe = sharpe(rng);
        stats.push_back(std::move(s));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(alloc::hybrid_weights(stats));
    }
}
BENCHMARK(bm_hybrid_weights)->Arg(10)->Arg(100);

void bm_backtest(benchmark::State& state) {
    SynthSpec spec;
    spec.scenario = Scenario::Bull;
    spec.n_assets = static_cast<int>(state.range(0));
    spec.n_days = 730;
    spec.seed = 5;
    const auto panel = align(synth_series(spec));

    engine::BacktestConfig config;
    config.symbols = panel.symbols;
    config.start = panel.dates[35];
    config.end = panel.dates.back();

    for (auto _ : state) {
        benchmark::DoNotOptimize(engine::run_backtest(panel, config));
    }
    state.SetItemsProcessed(state.iterations() * spec.n_days);
}
BENCHMARK(bm_backtest)->Arg(2)->Arg(10);

} // namespace

BENCHMARK_MAIN();
