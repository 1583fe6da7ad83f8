#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "itrader/bar.hpp"
#include "itrader/features.hpp"
#include "itrader/rng.hpp"

namespace itrader {

// Proportional commission in basis points of traded notional.
struct CostModel {
    double commission_bp = 0.08;

    double fraction() const { return commission_bp * 1e-4; }
};

// One closed round trip in a single direction. Costs charge one unit of
// commission at the entry execution price and one at the exit execution
// price; the extra unit traded on a direct reversal belongs to the next
// trade's entry.
struct TradeRecord {
    int side = 0;  // +1 long, -1 short
    int entry_step = 0;
    double entry_price = 0.0;
    int exit_step = 0;
    double exit_price = 0.0;
    double net_return = 0.0;
    int duration = 0;  // minutes
};

struct Transition {
    Observation state;
    int action = 0;  // executed target position
    double reward = 0.0;
    double log_prob = 0.0;
    double value = 0.0;
    bool done = false;
};

// One row of the episode trace export. `position` is the position carried
// into the step; `action` is the executed target.
struct TraceRow {
    int step = 0;
    std::int64_t timestamp = 0;
    int action = 0;
    int position = 0;
    double exec_price = 0.0;
    double reward = 0.0;
    double tx = 0.0;
};

// Simulates one trading day as a fixed-horizon episode. Actions are target
// positions; a position change executes at the next bar's open and pays
// commission on the traded units; rewards are per-step log returns. The
// final step's action is overridden to flat so every episode ends with a
// liquidated book.
class TradingEnv {
public:
    explicit TradingEnv(CostModel cost) : cost_(cost) {}

    // Binds the environment to a day and returns s_0. The normalizer is
    // owned by the caller and carries state across days.
    Observation reset(const TradingDay& day, Normalizer& normalizer);

    struct StepOutcome {
        Observation next;  // valid only while !done
        double reward = 0.0;
        bool done = false;
        int executed_action = 0;
        double exec_price = 0.0;
        double tx = 0.0;
    };

    StepOutcome step(int action);

    bool done() const { return done_; }
    int position() const { return position_; }
    int step_index() const { return t_; }
    int horizon() const { return day_ ? day_->horizon() : 0; }
    const std::vector<SpellRecord>& spell_log() const { return spells_; }
    const std::vector<TradeRecord>& trades() const { return trades_; }
    const std::vector<TraceRow>& trace() const { return trace_; }
    const std::array<double, kStateDim>& last_raw_features() const { return last_raw_; }

private:
    Observation make_observation(int t);

    CostModel cost_;
    const TradingDay* day_ = nullptr;
    Normalizer* normalizer_ = nullptr;
    std::vector<PriceFeatures> price_features_;
    int t_ = 0;
    int position_ = 0;
    bool done_ = true;
    std::optional<PositionSpell> current_;
    std::vector<SpellRecord> spells_;
    std::vector<TradeRecord> trades_;
    std::vector<TraceRow> trace_;
    std::array<double, kStateDim> last_raw_{};
};

struct PolicyOutput {
    std::array<double, 3> probs{};  // actions -1, 0, +1
    double value = 0.0;
};

// Argmax action; exact ties prefer the smallest absolute position (0, then
// -1, then +1).
int greedy_action(const std::array<double, 3>& probs);

// Inverse-CDF draw over the three actions; writes ln p(action) when
// log_prob is non-null.
int sample_action(const std::array<double, 3>& probs, Rng& rng, double* log_prob = nullptr);

using PolicyFn = std::function<PolicyOutput(const Observation&)>;

enum class ActionMode { kSample, kGreedy };

struct EpisodeResult {
    CivilDate date;
    std::vector<Transition> transitions;
    std::vector<TradeRecord> trades;
    std::vector<TraceRow> trace;
    std::vector<int> actions;
    std::vector<FeatureDumpRow> features;  // filled when record_features is set
    double total_reward = 0.0;
};

// Drives one full episode. `rng` is required in sampling mode. When
// `zero_mask` is given, masked state entries are zeroed after normalization
// before the policy sees them (and in the stored transitions).
EpisodeResult run_episode(const TradingDay& day, Normalizer& normalizer, const PolicyFn& policy,
                          ActionMode mode, const CostModel& cost, Rng* rng = nullptr,
                          const std::array<bool, kStateDim>* zero_mask = nullptr,
                          bool record_features = false);

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows);

}  // namespace itrader
