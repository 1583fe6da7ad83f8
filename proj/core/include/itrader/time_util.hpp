#pragma once

#include <cstdint>
#include <string>

namespace itrader {

// Calendar date. All timestamps in the engine are UTC epoch seconds at
// minute resolution; session windows are expressed in minutes-of-day.
struct CivilDate {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31

    bool operator==(const CivilDate&) const = default;
    auto operator<=>(const CivilDate&) const = default;
};

// Days since 1970-01-01 (proleptic Gregorian).
std::int64_t days_from_civil(const CivilDate& d);
CivilDate civil_from_days(std::int64_t days);

// 0 = Monday .. 6 = Sunday.
int weekday(const CivilDate& d);
bool is_weekday(const CivilDate& d);
CivilDate next_weekday(const CivilDate& d);

// Months since year 0 for calendar-month arithmetic on split windows.
inline std::int64_t month_index(const CivilDate& d) {
    return static_cast<std::int64_t>(d.year) * 12 + (d.month - 1);
}

std::int64_t epoch_seconds(const CivilDate& d, int minute_of_day);
CivilDate date_of_epoch(std::int64_t epoch_sec);
int minute_of_day(std::int64_t epoch_sec);

// Strict "YYYY-MM-DDTHH:MM:SSZ" parser. Throws std::runtime_error on
// malformed input.
std::int64_t parse_iso8601_utc(const std::string& text);
std::string format_iso8601_utc(std::int64_t epoch_sec);

std::string format_date(const CivilDate& d);
CivilDate parse_date(const std::string& text);

}  // namespace itrader
