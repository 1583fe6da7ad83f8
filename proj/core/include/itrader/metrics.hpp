#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "itrader/market_data.hpp"
#include "itrader/policy_runner.hpp"

namespace itrader {

// Minute-level strategy returns with their per-day compounding. The
// timestamp of entry k is the bar whose open starts the interval;
// day_offsets[d] is the index of day d's first minute entry.
struct ReturnSeries {
    std::vector<std::int64_t> timestamps;
    std::vector<double> minute_returns;
    std::vector<CivilDate> dates;
    std::vector<double> daily_returns;
    std::vector<std::size_t> day_offsets;
};

// Open-to-open strategy returns of traced episodes:
//   r = (a_t (O_{t+1} - O_t) - COM O_t |a_t - a_{t-1}|) / O_t
// per decision window, concatenated across days. Throws when the traces do
// not line up with the days.
ReturnSeries strategy_returns(const std::vector<TradingDay>& days,
                              const std::vector<EpisodeTrace>& traces, double commission_bp);

// Running compounded curve: prod(1 + r_i) - 1.
std::vector<double> cumulative_curve(const std::vector<double>& returns);

// Worst peak-to-trough decline of the compounded equity path (which starts
// at 1 before the first return).
double max_drawdown_from_returns(const std::vector<double>& returns);

// Annualized performance metrics over a daily return series (252-day
// year). Downside deviation is the about-zero semideviation over all days.
// Ratios with zero denominators are reported as unset, never as zero.
struct MetricsReport {
    double ann_mean = 0.0;
    double ann_std = 0.0;
    double downside_dev = 0.0;
    double max_drawdown = 0.0;
    std::optional<double> sharpe;
    std::optional<double> sortino;
    std::optional<double> calmar;
    double pct_positive = 0.0;                // share of days with r > 0, in percent
    std::optional<double> pos_neg_ratio;      // mean positive / |mean negative| daily return
};

MetricsReport compute_metrics(const std::vector<double>& daily_returns);

// Equal-weight portfolio: the per-minute mean across time-aligned series.
// Throws on timestamp misalignment.
ReturnSeries portfolio(const std::vector<ReturnSeries>& series);

}  // namespace itrader
