#include "itrader/rollout.hpp"

#include <stdexcept>
#include <thread>

namespace itrader {

void RolloutBuffer::append(const Transition& t) {
    obs.push_back(t.state);
    action_index.push_back(t.action + 1);
    log_probs.push_back(t.log_prob);
    values.push_back(t.value);
    rewards.push_back(t.reward);
    dones.push_back(t.done ? 1 : 0);
}

RolloutBuffer collect_rollouts(const PolicyParams& params, std::vector<Actor>& actors,
                               int batch_size, const CostModel& cost, bool parallel,
                               const std::function<void(const CivilDate&)>& on_day) {
    if (actors.empty()) throw std::invalid_argument("collect_rollouts: no actors");
    const int n_actors = static_cast<int>(actors.size());
    const int quota = (batch_size + n_actors - 1) / n_actors;

    PolicyFn policy = [&params](const Observation& obs) {
        ForwardResult r = forward(params, obs);
        return PolicyOutput{r.dist.probs, r.value};
    };

    std::vector<RolloutBuffer> locals(actors.size());
    std::vector<std::vector<CivilDate>> used_days(actors.size());

    auto work = [&](std::size_t k) {
        Actor& actor = actors[k];
        int collected = 0;
        while (collected < quota && actor.next_day < actor.days.size()) {
            const TradingDay& day = *actor.days[actor.next_day++];
            used_days[k].push_back(day.date);
            EpisodeResult ep = run_episode(day, actor.normalizer, policy, ActionMode::kSample,
                                           cost, &actor.rng);
            for (const Transition& t : ep.transitions) locals[k].append(t);
            collected += static_cast<int>(ep.transitions.size());
        }
    };

    if (parallel && actors.size() > 1) {
        std::vector<std::thread> threads;
        threads.reserve(actors.size());
        for (std::size_t k = 0; k < actors.size(); ++k) threads.emplace_back(work, k);
        for (std::thread& t : threads) t.join();
    } else {
        for (std::size_t k = 0; k < actors.size(); ++k) work(k);
    }

    RolloutBuffer merged;
    for (std::size_t k = 0; k < actors.size(); ++k) {
        if (on_day)
            for (const CivilDate& d : used_days[k]) on_day(d);
        RolloutBuffer& l = locals[k];
        merged.obs.insert(merged.obs.end(), l.obs.begin(), l.obs.end());
        merged.action_index.insert(merged.action_index.end(), l.action_index.begin(),
                                   l.action_index.end());
        merged.log_probs.insert(merged.log_probs.end(), l.log_probs.begin(), l.log_probs.end());
        merged.values.insert(merged.values.end(), l.values.begin(), l.values.end());
        merged.rewards.insert(merged.rewards.end(), l.rewards.begin(), l.rewards.end());
        merged.dones.insert(merged.dones.end(), l.dones.begin(), l.dones.end());
    }
    return merged;
}

}  // namespace itrader
