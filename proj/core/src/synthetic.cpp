#include "itrader/synthetic.hpp"

#include <cmath>
#include <stdexcept>

#include "itrader/rng.hpp"

namespace itrader {

namespace {

// Relative variance profile across the session; normalized so the mean
// variance equals one.
double shape_factor(VolShape shape, int k, int n) {
    if (shape == VolShape::kFlat || n <= 1) return 1.0;
    double x = 2.0 * k / (n - 1) - 1.0;      // -1 at open, +1 at close
    double s = 0.75 + x * x;                 // U profile, mean 0.75 + 1/3
    return s / (0.75 + 1.0 / 3.0);
}

constexpr double kOvernightVolFraction = 0.5;
constexpr double kOvernightReversion = 0.1;   // against the trailing 21-day return
constexpr int kReversionLookbackDays = 21;

}  // namespace

std::vector<TradingDay> generate_synthetic(const SyntheticConfig& config,
                                           const SessionSpec& session) {
    if (config.n_days < 1) throw std::invalid_argument("n_days must be >= 1");
    if (config.pattern_strength < 0.0)
        throw std::invalid_argument("pattern_strength must be >= 0");
    if (config.base_price <= 0.0) throw std::invalid_argument("base_price must be positive");
    if (config.daily_vol < 0.0) throw std::invalid_argument("daily_vol must be >= 0");

    Rng rng(config.seed);
    const int n = session.bars_per_day();
    const double bar_vol = config.daily_vol / std::sqrt(static_cast<double>(n));
    const std::int64_t utc_shift = static_cast<std::int64_t>(session.utc_offset_minutes) * 60;

    std::vector<TradingDay> days;
    days.reserve(config.n_days);

    CivilDate date = config.start_date;
    if (!is_weekday(date)) date = next_weekday(date);

    double log_price = std::log(config.base_price);
    double prev_log_ret = 0.0;
    std::vector<double> day_closes;  // last closes, for the overnight reversion term

    for (int d = 0; d < config.n_days; ++d) {
        if (d > 0) {
            double gap = rng.normal() * config.daily_vol * kOvernightVolFraction;
            if (config.planted_pattern == PlantedPattern::kTimeOfDayDrift &&
                static_cast<int>(day_closes.size()) > kReversionLookbackDays) {
                double trailing = day_closes.back() / day_closes[day_closes.size() - 1 -
                                                                kReversionLookbackDays] -
                                  1.0;
                gap -= kOvernightReversion * trailing;
            }
            log_price += gap;
            prev_log_ret = 0.0;
        }

        TradingDay day;
        day.date = date;
        day.decision_begin = session.warmup_bars;
        day.decision_end = session.warmup_bars + session.horizon();
        day.bars.reserve(n);

        const std::int64_t day_base = days_from_civil(date) * 86400 - utc_shift;
        for (int k = 0; k < n; ++k) {
            double sigma = bar_vol * std::sqrt(shape_factor(config.intraday_vol_shape, k, n));
            double drift = 0.0;
            switch (config.planted_pattern) {
                case PlantedPattern::kNone:
                    break;
                case PlantedPattern::kMomentum:
                    drift = config.pattern_strength * (prev_log_ret > 0.0   ? 1.0
                                                       : prev_log_ret < 0.0 ? -1.0
                                                                            : 0.0);
                    break;
                case PlantedPattern::kMeanReversion:
                    drift = -config.pattern_strength * (prev_log_ret > 0.0   ? 1.0
                                                        : prev_log_ret < 0.0 ? -1.0
                                                                             : 0.0);
                    break;
                case PlantedPattern::kTimeOfDayDrift: {
                    int m = session.bar_minute(k);
                    if (m > 11 * 60 && m <= 12 * 60) drift = config.pattern_strength;
                    if (m > 14 * 60 && m <= 15 * 60) drift = -config.pattern_strength;
                    break;
                }
            }

            double ret = drift + sigma * rng.normal();
            double open = std::exp(log_price);
            log_price += ret;
            prev_log_ret = ret;
            double close = std::exp(log_price);

            // Intra-bar extremes as half-normal extensions past open/close.
            double hi_ext = std::abs(rng.normal()) * sigma * 0.5;
            double lo_ext = std::abs(rng.normal()) * sigma * 0.5;
            double high = std::max(open, close) * (1.0 + hi_ext);
            double low = std::min(open, close) * (1.0 - lo_ext);

            double volume = std::floor(150.0 * std::exp(0.3 * rng.normal()) *
                                       shape_factor(VolShape::kUShape, k, n));

            Bar bar;
            bar.timestamp = day_base + static_cast<std::int64_t>(session.bar_minute(k)) * 60;
            bar.open = open;
            bar.high = high;
            bar.low = low;
            bar.close = close;
            bar.volume = volume;
            day.bars.push_back(bar);
        }
        day_closes.push_back(day.bars.back().close);
        days.push_back(std::move(day));
        date = next_weekday(date);
    }
    return days;
}

std::string to_string(VolShape shape) {
    return shape == VolShape::kFlat ? "flat" : "u-shape";
}

std::string to_string(PlantedPattern pattern) {
    switch (pattern) {
        case PlantedPattern::kNone: return "none";
        case PlantedPattern::kMomentum: return "momentum";
        case PlantedPattern::kMeanReversion: return "mean-reversion";
        case PlantedPattern::kTimeOfDayDrift: return "time-of-day";
    }
    return "none";
}

VolShape vol_shape_from_string(const std::string& s) {
    if (s == "flat") return VolShape::kFlat;
    if (s == "u-shape") return VolShape::kUShape;
    throw std::invalid_argument("unknown vol shape '" + s + "' (flat, u-shape)");
}

PlantedPattern pattern_from_string(const std::string& s) {
    if (s == "none") return PlantedPattern::kNone;
    if (s == "momentum") return PlantedPattern::kMomentum;
    if (s == "mean-reversion") return PlantedPattern::kMeanReversion;
    if (s == "time-of-day") return PlantedPattern::kTimeOfDayDrift;
    throw std::invalid_argument("unknown pattern '" + s +
                                "' (none, momentum, mean-reversion, time-of-day)");
}

}  // namespace itrader
