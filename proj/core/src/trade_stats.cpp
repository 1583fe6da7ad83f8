#include "itrader/trade_stats.hpp"

#include <cmath>
#include <stdexcept>

namespace itrader {

TradeStats trade_stats(const std::vector<TradeRecord>& trades) {
    TradeStats stats;
    stats.n_trades = static_cast<int>(trades.size());
    if (trades.empty()) return stats;

    double pos_sum = 0.0, neg_sum = 0.0, duration_sum = 0.0;
    int wins = 0, losses = 0;
    for (const TradeRecord& t : trades) {
        if (t.net_return > 0.0) {
            ++wins;
            pos_sum += t.net_return;
        } else {
            ++losses;
            neg_sum += t.net_return;
        }
        duration_sum += t.duration;
    }

    const double n = static_cast<double>(trades.size());
    const double win_rate = wins / n;
    stats.win_rate = 100.0 * win_rate;
    stats.mean_duration = duration_sum / n;
    if (wins > 0) stats.mean_positive = pos_sum / wins;
    if (losses > 0) stats.mean_negative = neg_sum / losses;
    if (wins > 0 && losses > 0 && neg_sum != 0.0)
        stats.pos_neg_ratio = (pos_sum / wins) / std::abs(neg_sum / losses);

    const double e_pos = wins > 0 ? pos_sum / wins : 0.0;
    const double e_neg = losses > 0 ? neg_sum / losses : 0.0;
    stats.expected_return = win_rate * e_pos + (1.0 - win_rate) * e_neg;
    return stats;
}

IntradayProfile intraday_profiles(const std::vector<TradeRecord>& trades, int horizon,
                                  int bucket_minutes) {
    if (bucket_minutes < 1) throw std::invalid_argument("intraday_profiles: bad bucket size");
    if (horizon < 1) throw std::invalid_argument("intraday_profiles: bad horizon");

    const int n_buckets = (horizon + bucket_minutes - 1) / bucket_minutes;
    IntradayProfile profile;
    profile.bucket_minutes = bucket_minutes;
    profile.pct_initiated.assign(n_buckets, 0.0);
    profile.mean_duration.assign(n_buckets, std::nullopt);

    std::vector<int> counts(n_buckets, 0);
    std::vector<double> durations(n_buckets, 0.0);
    for (const TradeRecord& t : trades) {
        if (t.entry_step < 0 || t.entry_step >= horizon)
            throw std::invalid_argument("intraday_profiles: entry step outside the horizon");
        const int b = t.entry_step / bucket_minutes;
        ++counts[b];
        durations[b] += t.duration;
    }
    if (!trades.empty()) {
        for (int b = 0; b < n_buckets; ++b) {
            profile.pct_initiated[b] = 100.0 * counts[b] / static_cast<double>(trades.size());
            if (counts[b] > 0) profile.mean_duration[b] = durations[b] / counts[b];
        }
    }
    return profile;
}

}  // namespace itrader
