#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "itrader/bar.hpp"
#include "itrader/indicators.hpp"

namespace itrader {

inline constexpr int kStateDim = 13;

// State layout: the nine price-based entries followed by the four
// positional entries.
inline constexpr std::array<const char*, kStateDim> kFeatureNames{
    "ret_1",     "ret_5",    "ret_15",          "ret_30",       "ret_60",
    "rsi",       "adx",      "ultosc",          "willr",        "time_left",
    "position",  "position_return", "daily_return"};

struct PriceFeatures {
    std::array<double, 5> returns{};  // 1, 5, 15, 30, 60 minute lookbacks
    double rsi = 50.0;
    double adx = 0.0;
    double ultosc = 50.0;
    double willr = 50.0;
};

struct PositionalFeatures {
    int time_left = 0;            // minutes remaining in the decision window
    int position = 0;             // -1, 0, +1
    double position_return = 0.0; // open position return after entry costs
    double daily_return = 0.0;    // day-to-date return after costs
};

struct Observation {
    std::array<double, kStateDim> values{};
};

// Price features for every decision step of a day, computed once per day
// from the day's bars alone (indicator windows warm-start at the session
// open, inside the one-hour warm-up).
std::vector<PriceFeatures> compute_price_features(const TradingDay& day);

// An open position: entered by the action taken at decision step
// entry_step, executed at the next bar's open.
struct PositionSpell {
    int action = 0;
    int entry_step = 0;
    double entry_exec_price = 0.0;
    double entry_tx = 0.0;  // commission for all units traded on entry
};

// A finished position change. Flat spells (entered when a position exits to
// flat) complete immediately: their net return is just the entry cost.
struct SpellRecord {
    PositionSpell spell;
    int exit_step = 0;
    double exit_exec_price = 0.0;
    double hpr = 0.0;  // net return on the entry notional
};

// Positional feature block at decision step t. `completed` must be the
// day's position-change log in chronological order; `first_decision_open`
// is the open price of the first decision bar.
PositionalFeatures positional_features(const std::vector<SpellRecord>& completed,
                                       const std::optional<PositionSpell>& current, int t,
                                       int horizon, double current_close,
                                       double first_decision_open);

// Bounded-window mean/std tracker. Sums are kept relative to the first
// value seen so a constant stream reports exactly zero variance.
class RunningStat {
public:
    explicit RunningStat(std::size_t capacity);

    void push(double x);
    std::size_t size() const { return size_; }
    double mean() const;
    double sample_std() const;  // n-1 normalization; 0 when size < 2

private:
    std::vector<double> ring_;
    std::size_t capacity_;
    std::size_t head_ = 0;
    std::size_t size_ = 0;
    double shift_ = 0.0;
    bool shift_set_ = false;
    double sum_ = 0.0;
    double sumsq_ = 0.0;
};

struct NormalizerConfig {
    int return_window = 5 * 450;     // five trading days of session bars
    int episode_window = 100 * 360;  // one hundred episodes of decision steps
    int time_left_max = 359;
    double epsilon = 1e-12;
};

// Derives buffer capacities from a day's geometry (five days of session
// bars for returns, a hundred episodes of steps for PR/DR).
NormalizerConfig normalizer_config_for_day(const TradingDay& day);

// Per-environment feature scaler. Min-max features use fixed domains
// ([0, time_left_max] for TL, [0, 100] for the bounded indicators); returns
// and PR/DR are standardized against running buffers of past raw values.
// Outputs are computed from past data only, then the buffers absorb the
// current raw values; with fewer than two buffered values a standardized
// feature reads 0.
class Normalizer {
public:
    explicit Normalizer(NormalizerConfig config = {});

    Observation normalize_and_update(const PriceFeatures& price, const PositionalFeatures& pos);

    const NormalizerConfig& config() const { return config_; }

private:
    double standardized(const RunningStat& stat, double x) const;

    NormalizerConfig config_;
    std::vector<RunningStat> return_stats_;  // one per lookback window
    RunningStat pr_stat_;
    RunningStat dr_stat_;
};

// Diagnostic dump: one row per decision step with raw and normalized
// feature vectors (columns date, step, raw_<name>..., norm_<name>...).
struct FeatureDumpRow {
    CivilDate date;
    int step = 0;
    std::array<double, kStateDim> raw{};
    std::array<double, kStateDim> normalized{};
};

void write_feature_dump(const std::string& path, const std::vector<FeatureDumpRow>& rows);
std::vector<FeatureDumpRow> read_feature_dump(const std::string& path);

std::array<double, kStateDim> raw_feature_vector(const PriceFeatures& price,
                                                 const PositionalFeatures& pos);

}  // namespace itrader
