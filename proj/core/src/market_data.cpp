#include "itrader/market_data.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace itrader {

namespace {

double parse_real(const std::string& field, int line_no, const char* name) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw std::runtime_error("line " + std::to_string(line_no) + ": bad " + name +
                                 " field '" + field + "'");
    return value;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::vector<Bar> load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "timestamp,open,high,low,close,volume")
        throw std::runtime_error(path + ": unexpected header '" + line + "'");

    std::vector<Bar> bars;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_fields(line);
        if (fields.size() != 6)
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected 6 fields, got " +
                                     std::to_string(fields.size()));
        Bar b;
        try {
            b.timestamp = parse_iso8601_utc(fields[0]);
        } catch (const std::exception& e) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
        }
        b.open = parse_real(fields[1], line_no, "open");
        b.high = parse_real(fields[2], line_no, "high");
        b.low = parse_real(fields[3], line_no, "low");
        b.close = parse_real(fields[4], line_no, "close");
        b.volume = parse_real(fields[5], line_no, "volume");

        std::string err = bar_violation(b);
        if (!err.empty())
            throw std::runtime_error("line " + std::to_string(line_no) + ": " + err);
        if (!bars.empty() && b.timestamp <= bars.back().timestamp)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": non-monotonic timestamps " +
                                     format_iso8601_utc(bars.back().timestamp) + " -> " +
                                     format_iso8601_utc(b.timestamp));
        bars.push_back(b);
    }
    return bars;
}

void write_csv(const std::string& path, const std::vector<Bar>& bars) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "timestamp,open,high,low,close,volume\n";
    char buf[256];
    for (const Bar& b : bars) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      format_iso8601_utc(b.timestamp).c_str(), b.open, b.high, b.low, b.close,
                      b.volume);
        out << buf;
    }
}

CleanResult clean_and_segment(const std::vector<Bar>& bars, const SessionSpec& session,
                              double min_daily_volume) {
    CleanResult result;
    const std::int64_t offset = static_cast<std::int64_t>(session.utc_offset_minutes) * 60;

    // Group in-session bars by exchange-time calendar date.
    std::map<std::int64_t, std::vector<Bar>> by_day;  // key: local day number
    for (const Bar& b : bars) {
        if (!session.in_session(b.timestamp)) continue;
        std::int64_t local = b.timestamp + offset;
        std::int64_t day_num = local / 86400;
        if (local < 0 && local % 86400 != 0) --day_num;
        by_day[day_num].push_back(b);
    }

    const int n = session.bars_per_day();
    for (auto& [day_num, day_bars] : by_day) {
        CivilDate date = civil_from_days(day_num);
        if (day_bars.empty()) continue;

        double total_volume = 0.0;
        for (const Bar& b : day_bars) total_volume += b.volume;
        if (total_volume < min_daily_volume) {
            std::ostringstream oss;
            oss << "day " << format_date(date) << " dropped: volume " << total_volume
                << " below " << min_daily_volume;
            result.warnings.push_back(oss.str());
            continue;
        }

        TradingDay day;
        day.date = date;
        day.decision_begin = session.warmup_bars;
        day.decision_end = session.warmup_bars + session.horizon();
        day.bars.reserve(n);

        size_t src = 0;
        double last_close = 0.0;
        for (int k = 0; k < n; ++k) {
            std::int64_t want =
                day_num * 86400 + static_cast<std::int64_t>(session.bar_minute(k)) * 60 - offset;
            if (src < day_bars.size() && day_bars[src].timestamp == want) {
                day.bars.push_back(day_bars[src]);
                last_close = day_bars[src].close;
                ++src;
            } else {
                double px = last_close > 0.0 ? last_close : day_bars.front().open;
                day.bars.push_back(Bar{want, px, px, px, px, 0.0});
            }
        }
        result.days.push_back(std::move(day));
    }
    return result;
}

std::vector<Bar> flatten_days(const std::vector<TradingDay>& days) {
    std::vector<Bar> bars;
    for (const TradingDay& d : days) bars.insert(bars.end(), d.bars.begin(), d.bars.end());
    return bars;
}

SplitResult rolling_splits(const std::vector<TradingDay>& days, int train_months, int test_months,
                           int val_months) {
    SplitResult result;
    if (days.empty()) {
        result.diagnostic = "no trading days supplied";
        return result;
    }
    if (val_months <= 0 || val_months >= train_months || test_months <= 0)
        throw std::invalid_argument("invalid split parameters");

    const std::int64_t first_month = month_index(days.front().date);
    const std::int64_t last_month = month_index(days.back().date);
    const std::int64_t n_months = last_month - first_month + 1;
    const int roll_span = train_months + test_months;

    if (n_months < roll_span) {
        result.diagnostic = "history spans " + std::to_string(n_months) + " months; at least " +
                            std::to_string(roll_span) + " are needed for one roll";
        return result;
    }

    auto in_months = [&](const TradingDay& d, std::int64_t lo, std::int64_t hi) {
        std::int64_t m = month_index(d.date);
        return m >= lo && m < hi;
    };

    const std::int64_t n_rolls = (n_months - roll_span) / test_months + 1;
    for (std::int64_t r = 0; r < n_rolls; ++r) {
        const std::int64_t m0 = first_month + r * test_months;
        RollSplit roll;
        for (const TradingDay& d : days) {
            if (in_months(d, m0, m0 + train_months - val_months))
                roll.train_days.push_back(d);
            else if (in_months(d, m0 + train_months - val_months, m0 + train_months))
                roll.val_days.push_back(d);
            else if (in_months(d, m0 + train_months, m0 + roll_span))
                roll.test_days.push_back(d);
        }
        result.rolls.push_back(std::move(roll));
    }
    return result;
}

}  // namespace itrader
