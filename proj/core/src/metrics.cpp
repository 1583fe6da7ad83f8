#include "itrader/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace itrader {

ReturnSeries strategy_returns(const std::vector<TradingDay>& days,
                              const std::vector<EpisodeTrace>& traces, double commission_bp) {
    if (days.size() != traces.size())
        throw std::invalid_argument("strategy_returns: day/trace count mismatch");
    const double f = commission_bp * 1e-4;

    ReturnSeries series;
    for (std::size_t d = 0; d < days.size(); ++d) {
        const TradingDay& day = days[d];
        const EpisodeTrace& trace = traces[d];
        if (!(trace.date == day.date))
            throw std::invalid_argument("strategy_returns: trace date " +
                                        format_date(trace.date) + " does not match day " +
                                        format_date(day.date));
        const int horizon = day.horizon();
        if (static_cast<int>(trace.actions.size()) != horizon)
            throw std::invalid_argument("strategy_returns: trace length mismatch on " +
                                        format_date(day.date));

        series.day_offsets.push_back(series.minute_returns.size());
        double growth = 1.0;
        for (int t = 0; t < horizon; ++t) {
            // Position a_t is in force from the open after its decision bar.
            const int j = day.decision_begin + 1 + t;
            const int pos = trace.actions[t];
            const int prev = t == 0 ? 0 : trace.actions[t - 1];
            const double open = day.bars[j].open;
            const double next_open = day.bars[j + 1].open;
            const double r =
                (pos * (next_open - open) - f * open * std::abs(pos - prev)) / open;
            series.timestamps.push_back(day.bars[j].timestamp);
            series.minute_returns.push_back(r);
            growth *= 1.0 + r;
        }
        series.dates.push_back(day.date);
        series.daily_returns.push_back(growth - 1.0);
    }
    return series;
}

std::vector<double> cumulative_curve(const std::vector<double>& returns) {
    std::vector<double> out;
    out.reserve(returns.size());
    double growth = 1.0;
    for (double r : returns) {
        growth *= 1.0 + r;
        out.push_back(growth - 1.0);
    }
    return out;
}

double max_drawdown_from_returns(const std::vector<double>& returns) {
    double equity = 1.0;
    double peak = 1.0;
    double mdd = 0.0;
    for (double r : returns) {
        equity *= 1.0 + r;
        peak = std::max(peak, equity);
        mdd = std::max(mdd, (peak - equity) / peak);
    }
    return mdd;
}

MetricsReport compute_metrics(const std::vector<double>& daily) {
    if (daily.size() < 2)
        throw std::invalid_argument("compute_metrics: needs at least two daily returns");
    const double n = static_cast<double>(daily.size());

    double mean = 0.0;
    for (double r : daily) mean += r;
    mean /= n;

    double var = 0.0;
    double downside_sq = 0.0;
    int positives = 0;
    double pos_sum = 0.0, neg_sum = 0.0;
    int pos_count = 0, neg_count = 0;
    for (double r : daily) {
        var += (r - mean) * (r - mean);
        if (r < 0.0) downside_sq += r * r;
        if (r > 0.0) {
            ++positives;
            pos_sum += r;
            ++pos_count;
        } else if (r < 0.0) {
            neg_sum += r;
            ++neg_count;
        }
    }
    var /= n - 1.0;

    MetricsReport m;
    m.ann_mean = 252.0 * mean;
    m.ann_std = std::sqrt(252.0) * std::sqrt(var);
    m.downside_dev = std::sqrt(252.0) * std::sqrt(downside_sq / n);
    m.max_drawdown = max_drawdown_from_returns(daily);
    if (m.ann_std > 0.0) m.sharpe = m.ann_mean / m.ann_std;
    if (m.downside_dev > 0.0) m.sortino = m.ann_mean / m.downside_dev;
    if (m.max_drawdown > 0.0) m.calmar = m.ann_mean / m.max_drawdown;
    m.pct_positive = 100.0 * positives / n;
    if (pos_count > 0 && neg_count > 0)
        m.pos_neg_ratio = (pos_sum / pos_count) / std::abs(neg_sum / neg_count);
    return m;
}

ReturnSeries portfolio(const std::vector<ReturnSeries>& series) {
    if (series.empty()) throw std::invalid_argument("portfolio: no component series");
    const ReturnSeries& first = series.front();
    for (const ReturnSeries& s : series) {
        if (s.timestamps != first.timestamps)
            throw std::invalid_argument("portfolio: component timestamps misaligned");
        if (s.dates != first.dates || s.day_offsets != first.day_offsets)
            throw std::invalid_argument("portfolio: component day coverage misaligned");
    }

    ReturnSeries out;
    out.timestamps = first.timestamps;
    out.dates = first.dates;
    out.day_offsets = first.day_offsets;
    out.minute_returns.assign(first.minute_returns.size(), 0.0);
    for (const ReturnSeries& s : series)
        for (std::size_t i = 0; i < out.minute_returns.size(); ++i)
            out.minute_returns[i] += s.minute_returns[i];
    for (double& r : out.minute_returns) r /= static_cast<double>(series.size());

    // Recompound per day along the shared day boundaries.
    out.daily_returns.clear();
    for (std::size_t d = 0; d < out.dates.size(); ++d) {
        const std::size_t begin = out.day_offsets[d];
        const std::size_t end =
            d + 1 < out.day_offsets.size() ? out.day_offsets[d + 1] : out.minute_returns.size();
        double growth = 1.0;
        for (std::size_t i = begin; i < end; ++i) growth *= 1.0 + out.minute_returns[i];
        out.daily_returns.push_back(growth - 1.0);
    }
    return out;
}

}  // namespace itrader
