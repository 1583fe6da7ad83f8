#include "itrader/time_util.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace itrader {

std::int64_t days_from_civil(const CivilDate& d) {
    // Howard Hinnant's algorithm.
    int y = d.year;
    const unsigned m = static_cast<unsigned>(d.month);
    const unsigned dd = static_cast<unsigned>(d.day);
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + dd - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m),
                     static_cast<int>(d)};
}

int weekday(const CivilDate& d) {
    // days_from_civil(1970-01-01) == 0, a Thursday.
    std::int64_t z = days_from_civil(d);
    return static_cast<int>(((z % 7) + 7 + 3) % 7);
}

bool is_weekday(const CivilDate& d) { return weekday(d) < 5; }

CivilDate next_weekday(const CivilDate& d) {
    CivilDate cur = civil_from_days(days_from_civil(d) + 1);
    while (!is_weekday(cur)) cur = civil_from_days(days_from_civil(cur) + 1);
    return cur;
}

std::int64_t epoch_seconds(const CivilDate& d, int minute) {
    return days_from_civil(d) * 86400 + static_cast<std::int64_t>(minute) * 60;
}

CivilDate date_of_epoch(std::int64_t epoch_sec) {
    std::int64_t days = epoch_sec / 86400;
    if (epoch_sec < 0 && epoch_sec % 86400 != 0) --days;
    return civil_from_days(days);
}

int minute_of_day(std::int64_t epoch_sec) {
    std::int64_t rem = epoch_sec % 86400;
    if (rem < 0) rem += 86400;
    return static_cast<int>(rem / 60);
}

namespace {

int parse_fixed_int(const std::string& s, size_t pos, size_t len) {
    if (pos + len > s.size()) throw std::runtime_error("timestamp too short: '" + s + "'");
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, value);
    if (ec != std::errc{} || ptr != s.data() + pos + len)
        throw std::runtime_error("invalid number in timestamp: '" + s + "'");
    return value;
}

}  // namespace

std::int64_t parse_iso8601_utc(const std::string& text) {
    // YYYY-MM-DDTHH:MM:SSZ
    if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
        text[13] != ':' || text[16] != ':' || text[19] != 'Z')
        throw std::runtime_error("timestamp not in YYYY-MM-DDTHH:MM:SSZ form: '" + text + "'");
    CivilDate d{parse_fixed_int(text, 0, 4), parse_fixed_int(text, 5, 2),
                parse_fixed_int(text, 8, 2)};
    int hh = parse_fixed_int(text, 11, 2);
    int mm = parse_fixed_int(text, 14, 2);
    int ss = parse_fixed_int(text, 17, 2);
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31 || hh > 23 || mm > 59 || ss > 59)
        throw std::runtime_error("timestamp field out of range: '" + text + "'");
    return days_from_civil(d) * 86400 + hh * 3600 + mm * 60 + ss;
}

std::string format_iso8601_utc(std::int64_t epoch_sec) {
    CivilDate d = date_of_epoch(epoch_sec);
    std::int64_t rem = epoch_sec - days_from_civil(d) * 86400;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", d.year, d.month, d.day,
                  static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

std::string format_date(const CivilDate& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

CivilDate parse_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw std::runtime_error("date not in YYYY-MM-DD form: '" + text + "'");
    CivilDate d{parse_fixed_int(text, 0, 4), parse_fixed_int(text, 5, 2),
                parse_fixed_int(text, 8, 2)};
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31)
        throw std::runtime_error("date field out of range: '" + text + "'");
    return d;
}

}  // namespace itrader
