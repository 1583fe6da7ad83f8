#pragma once

#include <optional>
#include <vector>

#include "itrader/environment.hpp"

namespace itrader {

// Aggregate statistics over closed trades. Trades with strictly positive
// net return count as wins; zero-return trades fall on the losing side so
// the expected-return decomposition stays exact. All fields are unset for
// an empty trade list.
struct TradeStats {
    int n_trades = 0;
    std::optional<double> win_rate;         // percent
    std::optional<double> mean_positive;
    std::optional<double> mean_negative;    // signed (non-positive)
    std::optional<double> pos_neg_ratio;    // mean_positive / |mean_negative|
    std::optional<double> expected_return;  // win_rate E[r+] + (1 - win_rate) E[r-]
    std::optional<double> mean_duration;    // minutes
};

TradeStats trade_stats(const std::vector<TradeRecord>& trades);

// Distribution of trade initiations over fixed-width step buckets tiling
// the decision window, with the mean trade duration per bucket (unset for
// empty buckets). Initiation percentages sum to 100 when any trades exist.
struct IntradayProfile {
    int bucket_minutes = 15;
    std::vector<double> pct_initiated;
    std::vector<std::optional<double>> mean_duration;
};

IntradayProfile intraday_profiles(const std::vector<TradeRecord>& trades, int horizon,
                                  int bucket_minutes = 15);

}  // namespace itrader
