#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "itrader/bar.hpp"

namespace itrader {

enum class VolShape { kFlat, kUShape };
enum class PlantedPattern { kNone, kMomentum, kMeanReversion, kTimeOfDayDrift };

// Synthetic minute-bar generator: a geometric random walk over consecutive
// weekday sessions, with an optional exploitable signal planted on top.
//
// Patterns (strength is a log-return drift per bar):
//   momentum        r_k gains +strength * sign(r_{k-1})
//   mean-reversion  r_k gains -strength * sign(r_{k-1})
//   time-of-day     bars stamped (11:00, 12:00] exchange time drift up by
//                   +strength and bars stamped (14:00, 15:00] drift down by
//                   -strength, so the day nets out flat; overnight gaps also
//                   lean against the trailing 21-day return, which removes
//                   any day-frequency momentum edge from the series.
struct SyntheticConfig {
    int n_days = 250;
    std::uint64_t seed = 1;
    double base_price = 100.0;
    double daily_vol = 0.01;
    VolShape intraday_vol_shape = VolShape::kFlat;
    PlantedPattern planted_pattern = PlantedPattern::kNone;
    double pattern_strength = 0.0;
    CivilDate start_date{2012, 1, 2};
};

std::vector<TradingDay> generate_synthetic(const SyntheticConfig& config,
                                           const SessionSpec& session = {});

// Flag-spelling helpers shared by the CLI and run manifests.
std::string to_string(VolShape shape);
std::string to_string(PlantedPattern pattern);
VolShape vol_shape_from_string(const std::string& s);
PlantedPattern pattern_from_string(const std::string& s);

}  // namespace itrader
