#pragma once

#include <array>
#include <optional>
#include <vector>

#include "itrader/environment.hpp"
#include "itrader/market_data.hpp"
#include "itrader/network.hpp"

namespace itrader {

struct EpisodeTrace {
    CivilDate date;
    std::vector<int> actions;
    std::vector<TraceRow> rows;
    std::vector<TradeRecord> trades;
    double total_reward = 0.0;
};

// Greedy, deterministic replay of a checkpointed policy over a day
// sequence with a fresh normalizer. When `zero_mask` is set the masked
// state entries are zeroed after normalization (feature-ablation mode).
std::vector<EpisodeTrace> evaluate_policy(
    const PolicyParams& params, const std::vector<TradingDay>& days, const CostModel& cost,
    const std::optional<std::array<bool, kStateDim>>& zero_mask = std::nullopt);

}  // namespace itrader
