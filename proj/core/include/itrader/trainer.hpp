#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "itrader/market_data.hpp"
#include "itrader/network.hpp"
#include "itrader/rollout.hpp"

namespace itrader {

struct PpoConfig {
    double learning_rate = 0.0001;
    int minibatch_size = 64;   // M
    int batch_size = 832;      // B, total transitions per update round
    int num_actors = 3;        // N
    double gae_lambda = 0.95;
    double value_coef = 0.5;
    double gamma = 1.0;
    double commission_bp = 0.08;
    double clip_eps = 0.2;
    int inner_epochs = 4;      // K
    int early_stop_patience = 5;
    int max_epochs = 100;
    bool advantage_normalization = true;
    double entropy_coef = 0.0;
    std::uint64_t seed = 1;
};

// Throws std::invalid_argument when any field is out of range
// (M <= N*B, 0 < eps < 1, gamma and lambda in [0,1], positive sizes).
void validate_config(const PpoConfig& config);

// Flat key=value round trip covering every field.
void save_ppo_config(const std::string& path, const PpoConfig& config);
PpoConfig load_ppo_config(const std::string& path);

struct IterationStats {
    int iteration = 0;
    int epoch = 0;
    double mean_loss = 0.0;
    double clip_fraction = 0.0;
};

struct TrainReport {
    std::vector<double> val_rewards;  // one entry per completed epoch
    std::vector<IterationStats> iterations;
    int stopping_epoch = 0;  // 1-based count of epochs run
    int best_epoch = 0;      // 1-based epoch of the returned checkpoint
    std::string checkpoint;  // identifier filled by the caller that saves it
};

struct UpdateStats {
    double mean_loss = 0.0;
    double clip_fraction = 0.0;
};

// Patience-based early stopping on validation reward. An epoch improves
// only when its reward strictly exceeds the best seen so far; training
// stops after `patience` consecutive non-improving epochs.
class EarlyStopTracker {
public:
    explicit EarlyStopTracker(int patience) : patience_(patience) {}

    // Records one epoch's validation reward; returns true when the epoch
    // improved on the best.
    bool record(double val_reward);
    bool should_stop() const { return streak_ >= patience_; }
    int best_epoch() const { return best_epoch_; }  // 1-based
    int epochs_seen() const { return epoch_; }

private:
    int patience_;
    int epoch_ = 0;
    int best_epoch_ = 0;
    int streak_ = 0;
    double best_ = 0.0;
    bool any_ = false;
};

// Computes GAE over the buffer, optionally standardizes advantages across
// it, then runs K shuffled minibatch passes of clipped-surrogate descent.
UpdateStats ppo_update(PolicyParams& params, AdamState& adam, RolloutBuffer& buffer,
                       const PpoConfig& config, Rng& shuffle_rng);

// Total greedy-policy log reward over a day sequence, evaluated with a
// fresh normalizer.
double validation_reward(const PolicyParams& params, const std::vector<TradingDay>& days,
                         const CostModel& cost, const NormalizerConfig& norm_config,
                         const std::function<void(const CivilDate&)>& on_day = {});

struct TrainHooks {
    // phase is "train" or "val"; called for every day an episode touches.
    std::function<void(const CivilDate&, const char*)> on_day;
    std::function<void(int epoch, double val_reward)> on_epoch;
};

struct TrainOutcome {
    TrainReport report;
    PolicyParams best_params;
    AdamState adam;
};

// Trains one walk-forward roll: every epoch consumes the training days in
// chronological order (partitioned round-robin over the actors), then the
// greedy policy is scored on the validation month; training stops when the
// validation reward fails to improve for early_stop_patience consecutive
// epochs (or at max_epochs) and the best-validation parameters are
// returned.
TrainOutcome train_roll(const RollSplit& split, const PpoConfig& config,
                        const TrainHooks& hooks = {}, bool parallel_actors = true);

void write_train_log(const std::string& path, const TrainReport& report);

}  // namespace itrader
