#include <benchmark/benchmark.h>

#include "itrader/features.hpp"
#include "itrader/indicators.hpp"
#include "itrader/synthetic.hpp"

using namespace itrader;

namespace {

const std::vector<TradingDay>& corpus() {
    static auto days = generate_synthetic(SyntheticConfig{.n_days = 5, .seed = 1});
    return days;
}

void BM_IndicatorSeries(benchmark::State& state) {
    const TradingDay& day = corpus().front();
    std::vector<double> highs, lows, closes;
    for (const Bar& b : day.bars) {
        highs.push_back(b.high);
        lows.push_back(b.low);
        closes.push_back(b.close);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(rsi_series(closes));
        benchmark::DoNotOptimize(adx_series(highs, lows, closes));
        benchmark::DoNotOptimize(ultosc_series(highs, lows, closes));
        benchmark::DoNotOptimize(willr_series(highs, lows, closes));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(closes.size()));
}
BENCHMARK(BM_IndicatorSeries);

void BM_DayPriceFeatures(benchmark::State& state) {
    const TradingDay& day = corpus().front();
    for (auto _ : state) benchmark::DoNotOptimize(compute_price_features(day));
    state.SetItemsProcessed(state.iterations() * day.horizon());
}
BENCHMARK(BM_DayPriceFeatures);

}  // namespace
