#include "itrader/bar.hpp"

#include <sstream>

namespace itrader {

std::string bar_violation(const Bar& b) {
    std::ostringstream oss;
    if (!(b.open > 0.0 && b.high > 0.0 && b.low > 0.0 && b.close > 0.0))
        oss << "non-positive price";
    else if (b.low > b.high)
        oss << "low " << b.low << " above high " << b.high;
    else if (b.open < b.low || b.open > b.high)
        oss << "open " << b.open << " outside [low, high]";
    else if (b.close < b.low || b.close > b.high)
        oss << "close " << b.close << " outside [low, high]";
    else if (b.volume < 0.0)
        oss << "negative volume";
    return oss.str();
}

void validate_trading_day(const TradingDay& day, const SessionSpec& session) {
    const int n = session.bars_per_day();
    if (static_cast<int>(day.bars.size()) != n) {
        throw std::runtime_error("day " + format_date(day.date) + ": expected " +
                                 std::to_string(n) + " bars, got " +
                                 std::to_string(day.bars.size()));
    }
    for (int k = 0; k < n; ++k) {
        const Bar& b = day.bars[k];
        std::string err = bar_violation(b);
        if (!err.empty())
            throw std::runtime_error("day " + format_date(day.date) + " bar " +
                                     std::to_string(k) + ": " + err);
        if (k > 0 && b.timestamp != day.bars[k - 1].timestamp + 60)
            throw std::runtime_error("day " + format_date(day.date) + " bar " +
                                     std::to_string(k) + ": timestamps not one minute apart");
    }
    if (day.decision_begin != session.warmup_bars ||
        day.decision_end != session.warmup_bars + session.horizon())
        throw std::runtime_error("day " + format_date(day.date) +
                                 ": decision range inconsistent with session spec");
}

}  // namespace itrader
