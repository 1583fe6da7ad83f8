#include "itrader/policy_runner.hpp"

namespace itrader {

std::vector<EpisodeTrace> evaluate_policy(
    const PolicyParams& params, const std::vector<TradingDay>& days, const CostModel& cost,
    const std::optional<std::array<bool, kStateDim>>& zero_mask) {
    std::vector<EpisodeTrace> traces;
    if (days.empty()) return traces;

    Normalizer normalizer(normalizer_config_for_day(days.front()));
    PolicyFn policy = [&params](const Observation& obs) {
        ForwardResult r = forward(params, obs);
        return PolicyOutput{r.dist.probs, r.value};
    };

    traces.reserve(days.size());
    for (const TradingDay& day : days) {
        EpisodeResult ep = run_episode(day, normalizer, policy, ActionMode::kGreedy, cost, nullptr,
                                       zero_mask ? &*zero_mask : nullptr);
        EpisodeTrace trace;
        trace.date = ep.date;
        trace.actions = std::move(ep.actions);
        trace.rows = std::move(ep.trace);
        trace.trades = std::move(ep.trades);
        trace.total_reward = ep.total_reward;
        traces.push_back(std::move(trace));
    }
    return traces;
}

}  // namespace itrader
