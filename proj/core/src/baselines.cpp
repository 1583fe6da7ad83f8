#include "itrader/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace itrader {

std::string to_string(BenchmarkKind kind) {
    switch (kind) {
        case BenchmarkKind::kBuyHold: return "buy_hold";
        case BenchmarkKind::kSellHold: return "sell_hold";
        case BenchmarkKind::kMomentum: return "momentum";
    }
    return "buy_hold";
}

ReturnSeries benchmark_returns(const std::vector<TradingDay>& days, BenchmarkKind kind,
                               double commission_bp, const std::vector<TradingDay>& history) {
    if (days.empty()) throw std::invalid_argument("benchmark_returns: no days");
    const double f = commission_bp * 1e-4;

    // Per-day target positions.
    std::vector<int> day_pos(days.size(), kind == BenchmarkKind::kSellHold ? -1 : 1);
    if (kind == BenchmarkKind::kMomentum) {
        std::vector<double> closes;
        closes.reserve(history.size() + days.size());
        for (const TradingDay& d : history) closes.push_back(d.bars.back().close);
        const std::size_t n_history = closes.size();
        for (const TradingDay& d : days) closes.push_back(d.bars.back().close);
        if (n_history < static_cast<std::size_t>(kMomentumLookbackDays) + 1)
            throw std::invalid_argument(
                "benchmark_returns: momentum needs at least " +
                std::to_string(kMomentumLookbackDays + 1) + " days of prior history");
        for (std::size_t d = 0; d < days.size(); ++d) {
            const std::size_t j = n_history + d;  // combined index of day d
            const double trailing =
                closes[j - 1] / closes[j - 1 - kMomentumLookbackDays] - 1.0;
            day_pos[d] = trailing > 0.0 ? 1 : -1;
        }
    }

    // One minute return per bar: position held from this bar's open to the
    // next bar's open, crossing day boundaries; the final bar of the period
    // marks the book to its close with no exit commission. A day's position
    // change executes at its first bar.
    ReturnSeries series;
    int prev_pos = 0;
    for (std::size_t d = 0; d < days.size(); ++d) {
        const TradingDay& day = days[d];
        const int pos = day_pos[d];
        const std::size_t n = day.bars.size();
        for (std::size_t k = 0; k < n; ++k) {
            const double open = day.bars[k].open;
            double next_open;
            if (k + 1 < n)
                next_open = day.bars[k + 1].open;
            else if (d + 1 < days.size())
                next_open = days[d + 1].bars.front().open;
            else
                next_open = day.bars[k].close;
            const int change = (k == 0) ? pos - prev_pos : 0;
            const double r = (pos * (next_open - open) - f * open * std::abs(change)) / open;
            series.timestamps.push_back(day.bars[k].timestamp);
            series.minute_returns.push_back(r);
        }
        prev_pos = pos;
        series.dates.push_back(day.date);
    }

    // Day segments follow return attribution: the overnight interval (last
    // bar of day d to the first bar of day d+1) belongs to day d+1, giving
    // close-of-previous-period to close-of-day daily arithmetic.
    series.day_offsets.assign(days.size(), 0);
    std::size_t prefix = 0;
    for (std::size_t d = 0; d < days.size(); ++d) {
        series.day_offsets[d] = d == 0 ? 0 : prefix - 1;
        prefix += days[d].bars.size();
    }
    series.daily_returns.assign(days.size(), 0.0);
    for (std::size_t d = 0; d < days.size(); ++d) {
        const std::size_t begin = series.day_offsets[d];
        const std::size_t end = d + 1 < days.size() ? series.day_offsets[d + 1]
                                                    : series.minute_returns.size();
        double growth = 1.0;
        for (std::size_t i = begin; i < end; ++i) growth *= 1.0 + series.minute_returns[i];
        series.daily_returns[d] = growth - 1.0;
    }
    return series;
}

}  // namespace itrader
