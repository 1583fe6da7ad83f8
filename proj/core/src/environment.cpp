#include "itrader/environment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace itrader {

Observation TradingEnv::reset(const TradingDay& day, Normalizer& normalizer) {
    if (day.decision_begin < 60)
        throw std::runtime_error("day " + format_date(day.date) +
                                 ": fewer than 60 lookback bars before the first decision step");
    if (static_cast<int>(day.bars.size()) < day.decision_end + 1)
        throw std::runtime_error("day " + format_date(day.date) +
                                 ": no execution bar after the final decision step");

    day_ = &day;
    normalizer_ = &normalizer;
    price_features_ = compute_price_features(day);
    t_ = 0;
    position_ = 0;
    done_ = false;
    current_.reset();
    spells_.clear();
    trades_.clear();
    trace_.clear();
    return make_observation(0);
}

Observation TradingEnv::make_observation(int t) {
    const Bar& bar = day_->bars[day_->decision_begin + t];
    PositionalFeatures pos =
        positional_features(spells_, current_, t, day_->horizon(), bar.close,
                            day_->bars[day_->decision_begin].open);
    const PriceFeatures& price = price_features_[t];
    last_raw_ = raw_feature_vector(price, pos);
    return normalizer_->normalize_and_update(price, pos);
}

TradingEnv::StepOutcome TradingEnv::step(int action) {
    if (done_) throw std::logic_error("step() called on a finished episode");
    if (action < -1 || action > 1) throw std::invalid_argument("action must be -1, 0 or +1");

    const int horizon = day_->horizon();
    if (t_ == horizon - 1) action = 0;  // forced end-of-day liquidation

    const int i = day_->decision_begin + t_;
    const Bar& cur = day_->bars[i];
    const Bar& next = day_->bars[i + 1];

    const int delta = action - position_;
    const double tx = std::abs(delta) * cost_.fraction() * next.open;
    const double exec = delta != 0 ? next.open : cur.close;
    const double reward = std::log((exec + action * (next.close - exec) - tx) / exec);

    if (delta != 0) {
        if (current_) {
            const PositionSpell& spell = *current_;
            double hpr = (spell.action * (next.open - spell.entry_exec_price) - spell.entry_tx) /
                         spell.entry_exec_price;
            spells_.push_back(SpellRecord{spell, t_, next.open, hpr});

            TradeRecord trade;
            trade.side = spell.action;
            trade.entry_step = spell.entry_step;
            trade.entry_price = spell.entry_exec_price;
            trade.exit_step = t_;
            trade.exit_price = next.open;
            trade.duration = t_ - spell.entry_step;
            trade.net_return = (spell.action * (next.open - spell.entry_exec_price) -
                                cost_.fraction() * (spell.entry_exec_price + next.open)) /
                               spell.entry_exec_price;
            trades_.push_back(trade);
        }
        if (action != 0) {
            current_ = PositionSpell{action, t_, next.open, tx};
        } else {
            // The cost of going flat is booked as a completed zero-position
            // spell so the daily-return ledger stays exact.
            current_.reset();
            spells_.push_back(
                SpellRecord{PositionSpell{0, t_, next.open, tx}, t_, next.open, -tx / next.open});
        }
    }

    trace_.push_back(TraceRow{t_, cur.timestamp, action, position_, exec, reward, tx});
    position_ = action;
    ++t_;
    done_ = (t_ == horizon);

    StepOutcome out;
    out.reward = reward;
    out.done = done_;
    out.executed_action = action;
    out.exec_price = exec;
    out.tx = tx;
    if (!done_) out.next = make_observation(t_);
    return out;
}

int greedy_action(const std::array<double, 3>& probs) {
    int action = 0;
    if (probs[0] > probs[action + 1]) action = -1;
    if (probs[2] > probs[action + 1]) action = 1;
    return action;
}

int sample_action(const std::array<double, 3>& probs, Rng& rng, double* log_prob) {
    double u = rng.uniform();
    double cdf = 0.0;
    int action = 1;  // falls through to +1 if rounding leaves u past the total
    for (int idx = 0; idx < 3; ++idx) {
        cdf += probs[idx];
        if (u < cdf) {
            action = idx - 1;
            break;
        }
    }
    if (log_prob) *log_prob = std::log(probs[action + 1]);
    return action;
}

EpisodeResult run_episode(const TradingDay& day, Normalizer& normalizer, const PolicyFn& policy,
                          ActionMode mode, const CostModel& cost, Rng* rng,
                          const std::array<bool, kStateDim>* zero_mask, bool record_features) {
    if (mode == ActionMode::kSample && rng == nullptr)
        throw std::invalid_argument("sampling mode requires an rng");

    TradingEnv env(cost);
    Observation obs = env.reset(day, normalizer);

    EpisodeResult result;
    result.date = day.date;
    const int horizon = day.horizon();
    result.transitions.reserve(horizon);
    result.actions.reserve(horizon);

    for (int t = 0; t < horizon; ++t) {
        if (zero_mask) {
            for (int f = 0; f < kStateDim; ++f)
                if ((*zero_mask)[f]) obs.values[f] = 0.0;
        }
        if (record_features) {
            FeatureDumpRow row;
            row.date = day.date;
            row.step = t;
            row.raw = env.last_raw_features();
            row.normalized = obs.values;
            result.features.push_back(row);
        }

        PolicyOutput pout = policy(obs);

        int action;
        double log_prob;
        if (t == horizon - 1) {
            // Forced liquidation: the executed action is flat regardless of
            // the policy, and the stored tuple reflects that.
            action = 0;
            log_prob = std::log(pout.probs[1]);
        } else if (mode == ActionMode::kGreedy) {
            action = greedy_action(pout.probs);
            log_prob = std::log(pout.probs[action + 1]);
        } else {
            action = sample_action(pout.probs, *rng, &log_prob);
        }

        TradingEnv::StepOutcome out = env.step(action);

        Transition tr;
        tr.state = obs;
        tr.action = out.executed_action;
        tr.reward = out.reward;
        tr.log_prob = log_prob;
        tr.value = pout.value;
        tr.done = out.done;
        result.transitions.push_back(tr);
        result.actions.push_back(out.executed_action);
        result.total_reward += out.reward;

        if (!out.done) obs = out.next;
    }

    result.trades = env.trades();
    result.trace = env.trace();
    return result;
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "step,timestamp,action,position,p_exec,reward,tx\n";
    char buf[160];
    for (const TraceRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%s,%d,%d,%.17g,%.17g,%.17g\n", r.step,
                      format_iso8601_utc(r.timestamp).c_str(), r.action, r.position, r.exec_price,
                      r.reward, r.tx);
        out << buf;
    }
}

}  // namespace itrader
