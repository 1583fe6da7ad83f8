#pragma once

#include <string>
#include <vector>

#include "itrader/bar.hpp"

namespace itrader {

// Loads a minute-bar CSV with header `timestamp,open,high,low,close,volume`,
// ISO-8601 UTC timestamps, rows sorted ascending. Throws std::runtime_error
// with the offending line number (and both timestamps, for ordering
// violations) on any malformed input.
std::vector<Bar> load_csv(const std::string& path);

void write_csv(const std::string& path, const std::vector<Bar>& bars);

struct CleanResult {
    std::vector<TradingDay> days;
    std::vector<std::string> warnings;
};

// Segments a chronological bar stream into gap-filled trading days.
// Missing minutes are filled with the last traded close (volume zero); a
// leading gap with no earlier trade that day is backfilled from the first
// available bar's open. Days whose in-session volume is below
// min_daily_volume, and days with no in-session bars at all, are dropped
// with a warning.
CleanResult clean_and_segment(const std::vector<Bar>& bars, const SessionSpec& session,
                              double min_daily_volume = 1000.0);

std::vector<Bar> flatten_days(const std::vector<TradingDay>& days);

struct RollSplit {
    std::vector<TradingDay> train_days;
    std::vector<TradingDay> val_days;   // final calendar month of the training year
    std::vector<TradingDay> test_days;
};

struct SplitResult {
    std::vector<RollSplit> rolls;
    std::string diagnostic;  // set when the history is too short for one roll
};

// Rolling walk-forward splits in calendar months: train_months of training
// (the last val_months of which become validation) followed by test_months
// of testing; successive rolls advance by test_months.
SplitResult rolling_splits(const std::vector<TradingDay>& days, int train_months = 12,
                           int test_months = 4, int val_months = 1);

}  // namespace itrader
