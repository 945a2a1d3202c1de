#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace logbed::timeutil {

// All simulation timestamps are microseconds since the Unix epoch, UTC.
using UsecTime = std::int64_t;

constexpr std::int64_t usec_per_sec  = 1'000'000LL;
constexpr std::int64_t usec_per_min  = 60LL * usec_per_sec;
constexpr std::int64_t usec_per_hour = 60LL * usec_per_min;
constexpr std::int64_t usec_per_day  = 24LL * usec_per_hour;

struct Civil {
    int year = 1970;
    int month = 1;   // 1..12
    int day = 1;     // 1..31
    int hour = 0;
    int minute = 0;
    int second = 0;
    int usec = 0;
};

std::int64_t days_from_civil(int y, int m, int d);
void civil_from_days(std::int64_t z, int& y, int& m, int& d);

UsecTime to_usec(const Civil& c);
Civil to_civil(UsecTime t);

int weekday(UsecTime t); // 0 = Sunday .. 6 = Saturday

// "2022-01-15" -> midnight UTC of that day.
std::optional<UsecTime> parse_date(std::string_view s);
// "05:30" -> minutes since midnight.
std::optional<int> parse_clock_minutes(std::string_view s);

// Renderers for the log grammars in use. Each has an exact inverse below.
std::string rfc3339(UsecTime t);                 // 2022-01-15T06:12:01.400000Z
std::string syslog_stamp(UsecTime t);            // Jan 15 06:12:01  (day space-padded: "Feb  8")
std::string apache_clf_stamp(UsecTime t);        // 15/Jan/2022:06:12:01 +0000
std::string apache_error_stamp(UsecTime t);      // Sat Jan 15 06:12:01.400000 2022
std::string openvpn_stamp(UsecTime t);           // Sat Jan 15 06:12:01 2022
std::string iso_seconds(UsecTime t);             // 2022-01-15 06:12:01
std::string epoch_millis(UsecTime t);            // 1642226521.400

std::optional<UsecTime> parse_rfc3339(std::string_view s);
// Syslog stamps carry no year; the reference year disambiguates.
std::optional<UsecTime> parse_syslog_stamp(std::string_view s, int year);
std::optional<UsecTime> parse_apache_clf_stamp(std::string_view s);
std::optional<UsecTime> parse_apache_error_stamp(std::string_view s);
std::optional<UsecTime> parse_openvpn_stamp(std::string_view s);
std::optional<UsecTime> parse_iso_seconds(std::string_view s);
std::optional<UsecTime> parse_epoch_millis(std::string_view s);

std::string month_abbrev(int month);             // 1 -> "Jan"
std::string weekday_abbrev(int wd);              // 0 -> "Sun"
std::optional<int> month_from_abbrev(std::string_view s);

} // namespace logbed::timeutil
