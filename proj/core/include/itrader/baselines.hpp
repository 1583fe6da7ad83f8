#pragma once

#include <string>
#include <vector>

#include "itrader/metrics.hpp"

namespace itrader {

enum class BenchmarkKind { kBuyHold, kSellHold, kMomentum };

std::string to_string(BenchmarkKind kind);

// Passive benchmark return series over `days`, using the same open-to-open
// return arithmetic as the traded strategy but holding through overnight
// gaps. Buy & hold / sell & hold keep +1 / -1 for the whole period and pay
// commission once at entry. Momentum resets each day to the sign of the
// trailing 21-trading-day close-to-close return (long if positive, short
// otherwise) and needs at least 22 days of `history` before the first
// evaluated day. The books are marked to the final bar's close.
ReturnSeries benchmark_returns(const std::vector<TradingDay>& days, BenchmarkKind kind,
                               double commission_bp,
                               const std::vector<TradingDay>& history = {});

inline constexpr int kMomentumLookbackDays = 21;

}  // namespace itrader
