#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "itrader/time_util.hpp"

namespace itrader {

// One minute of OHLCV market data. The timestamp marks the end of the
// sampled interval, so a session from 09:30 to 17:00 produces bars stamped
// 09:31 through 17:00.
struct Bar {
    std::int64_t timestamp = 0;  // UTC epoch seconds, minute resolution
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double volume = 0.0;
};

// Returns an empty string when the bar is well formed, otherwise a
// description of the violated invariant.
std::string bar_violation(const Bar& b);
inline bool bar_is_valid(const Bar& b) { return bar_violation(b).empty(); }

// Trading-session geometry for one asset. Times are minutes of day in
// exchange time; utc_offset_minutes maps stored UTC stamps into exchange
// time. The agent's decision window excludes a feature warm-up at the open
// and a liquidity buffer at the close.
struct SessionSpec {
    int open_minute = 9 * 60 + 30;   // 09:30
    int close_minute = 17 * 60;      // 17:00
    int utc_offset_minutes = 0;
    int warmup_bars = 60;
    int cooldown_bars = 30;

    int bars_per_day() const { return close_minute - open_minute; }
    int horizon() const { return bars_per_day() - warmup_bars - cooldown_bars; }

    // Minute-of-day (exchange time) of the k-th bar of the session, k in
    // [0, bars_per_day()).
    int bar_minute(int k) const { return open_minute + 1 + k; }

    bool in_session(std::int64_t utc_epoch_sec) const {
        int m = minute_of_day(utc_epoch_sec + static_cast<std::int64_t>(utc_offset_minutes) * 60);
        return m > open_minute && m <= close_minute;
    }

    bool operator==(const SessionSpec&) const = default;
};

// One fully cleaned session: a gap-free minute grid plus the index range of
// the agent's decision steps.
struct TradingDay {
    CivilDate date;
    std::vector<Bar> bars;
    int decision_begin = 0;  // index of the first decision bar
    int decision_end = 0;    // one past the last decision bar

    int horizon() const { return decision_end - decision_begin; }
};

// Throws std::runtime_error on any violated TradingDay invariant.
void validate_trading_day(const TradingDay& day, const SessionSpec& session);

}  // namespace itrader
