#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "itrader/environment.hpp"
#include "itrader/market_data.hpp"
#include "itrader/network.hpp"

namespace itrader {

// Flat experience store for one update round. Episode boundaries are
// marked by the done flags; advantages and value targets are filled in by
// the trainer after collection.
struct RolloutBuffer {
    std::vector<Observation> obs;
    std::vector<int> action_index;
    std::vector<double> log_probs;
    std::vector<double> values;
    std::vector<double> rewards;
    std::vector<std::uint8_t> dones;
    std::vector<double> advantages;
    std::vector<double> value_targets;

    std::size_t size() const { return obs.size(); }
    void append(const Transition& t);
};

// One rollout worker. Each actor owns its environment state (normalizer),
// its random stream, and a fixed slice of the training days, so collection
// results do not depend on thread scheduling.
struct Actor {
    Normalizer normalizer;
    Rng rng;
    std::vector<const TradingDay*> days;
    std::size_t next_day = 0;

    Actor(NormalizerConfig norm_config, std::uint64_t seed)
        : normalizer(norm_config), rng(seed) {}
};

// Runs whole sampled episodes on every actor until each has gathered at
// least ceil(batch_size / n_actors) transitions (or run out of assigned
// days), then concatenates the per-actor streams in actor order. With
// `parallel` set the actors run on their own threads; output is identical
// either way. `on_day` (optional) receives each consumed day, in actor
// order, after collection.
RolloutBuffer collect_rollouts(const PolicyParams& params, std::vector<Actor>& actors,
                               int batch_size, const CostModel& cost, bool parallel = false,
                               const std::function<void(const CivilDate&)>& on_day = {});

}  // namespace itrader
