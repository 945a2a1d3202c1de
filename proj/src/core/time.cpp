#include "logbed/core/time.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace logbed::timeutil {

namespace {

constexpr std::array<const char*, 12> kMonths = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun",
    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

constexpr std::array<const char*, 7> kWeekdays = {
    "Sun", "Mon", "Tue", "Wed", "Thu", "Fri", "Sat"};

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (std::size_t i = 0; i < len; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

} // namespace

std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097LL + static_cast<std::int64_t>(doe) - 719468LL;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
    y = static_cast<int>(yr + (m <= 2));
}

UsecTime to_usec(const Civil& c) {
    const std::int64_t days = days_from_civil(c.year, c.month, c.day);
    return days * usec_per_day + c.hour * usec_per_hour + c.minute * usec_per_min +
           c.second * usec_per_sec + c.usec;
}

Civil to_civil(UsecTime t) {
    std::int64_t days = t / usec_per_day;
    std::int64_t rem = t % usec_per_day;
    if (rem < 0) {
        rem += usec_per_day;
        days -= 1;
    }
    Civil c;
    civil_from_days(days, c.year, c.month, c.day);
    c.hour = static_cast<int>(rem / usec_per_hour);
    rem %= usec_per_hour;
    c.minute = static_cast<int>(rem / usec_per_min);
    rem %= usec_per_min;
    c.second = static_cast<int>(rem / usec_per_sec);
    c.usec = static_cast<int>(rem % usec_per_sec);
    return c;
}

int weekday(UsecTime t) {
    std::int64_t days = t / usec_per_day;
    if (t % usec_per_day < 0) days -= 1;
    // 1970-01-01 was a Thursday.
    std::int64_t wd = (days + 4) % 7;
    if (wd < 0) wd += 7;
    return static_cast<int>(wd);
}

std::optional<UsecTime> parse_date(std::string_view s) {
    int y, m, d;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    if (!read_int(s, 0, 4, y) || !read_int(s, 5, 2, m) || !read_int(s, 8, 2, d)) return std::nullopt;
    if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
    Civil c;
    c.year = y; c.month = m; c.day = d;
    return to_usec(c);
}

std::optional<int> parse_clock_minutes(std::string_view s) {
    int h, m;
    if (s.size() != 5 || s[2] != ':') return std::nullopt;
    if (!read_int(s, 0, 2, h) || !read_int(s, 3, 2, m)) return std::nullopt;
    if (h > 23 || m > 59) return std::nullopt;
    return h * 60 + m;
}

std::string rfc3339(UsecTime t) {
    const Civil c = to_civil(t);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%06dZ",
                  c.year, c.month, c.day, c.hour, c.minute, c.second, c.usec);
    return buf;
}

std::string syslog_stamp(UsecTime t) {
    const Civil c = to_civil(t);
    char buf[24];
    std::snprintf(buf, sizeof buf, "%s %2d %02d:%02d:%02d",
                  kMonths[c.month - 1], c.day, c.hour, c.minute, c.second);
    return buf;
}

std::string apache_clf_stamp(UsecTime t) {
    const Civil c = to_civil(t);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%02d/%s/%04d:%02d:%02d:%02d +0000",
                  c.day, kMonths[c.month - 1], c.year, c.hour, c.minute, c.second);
    return buf;
}

std::string apache_error_stamp(UsecTime t) {
    const Civil c = to_civil(t);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s %s %02d %02d:%02d:%02d.%06d %04d",
                  kWeekdays[weekday(t)], kMonths[c.month - 1], c.day,
                  c.hour, c.minute, c.second, c.usec, c.year);
    return buf;
}

std::string openvpn_stamp(UsecTime t) {
    const Civil c = to_civil(t);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%s %s %2d %02d:%02d:%02d %04d",
                  kWeekdays[weekday(t)], kMonths[c.month - 1], c.day,
                  c.hour, c.minute, c.second, c.year);
    return buf;
}

std::string iso_seconds(UsecTime t) {
    const Civil c = to_civil(t);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d %02d:%02d:%02d",
                  c.year, c.month, c.day, c.hour, c.minute, c.second);
    return buf;
}

std::string epoch_millis(UsecTime t) {
    const std::int64_t ms = t / 1000;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld.%03lld",
                  static_cast<long long>(ms / 1000), static_cast<long long>(ms % 1000));
    return buf;
}

std::optional<int> month_from_abbrev(std::string_view s) {
    for (int i = 0; i < 12; ++i)
        if (s == kMonths[i]) return i + 1;
    return std::nullopt;
}

std::string month_abbrev(int month) { return kMonths[month - 1]; }
std::string weekday_abbrev(int wd) { return kWeekdays[wd]; }

std::optional<UsecTime> parse_rfc3339(std::string_view s) {
    // 2022-01-15T06:12:01.400000Z
    if (s.size() != 27 || s[10] != 'T' || s[19] != '.' || s[26] != 'Z') return std::nullopt;
    auto date = parse_date(s.substr(0, 10));
    if (!date) return std::nullopt;
    int h, mi, sec, us;
    if (s[13] != ':' || s[16] != ':') return std::nullopt;
    if (!read_int(s, 11, 2, h) || !read_int(s, 14, 2, mi) || !read_int(s, 17, 2, sec) ||
        !read_int(s, 20, 6, us))
        return std::nullopt;
    if (h > 23 || mi > 59 || sec > 59) return std::nullopt;
    return *date + h * usec_per_hour + mi * usec_per_min + sec * usec_per_sec + us;
}

std::optional<UsecTime> parse_syslog_stamp(std::string_view s, int year) {
    // "Jan 15 06:12:01" or "Feb  8 06:12:01"
    if (s.size() != 15 || s[3] != ' ' || s[6] != ' ' || s[9] != ':' || s[12] != ':')
        return std::nullopt;
    auto mon = month_from_abbrev(s.substr(0, 3));
    if (!mon) return std::nullopt;
    int day;
    if (s[4] == ' ') {
        if (!read_int(s, 5, 1, day)) return std::nullopt;
    } else {
        if (!read_int(s, 4, 2, day)) return std::nullopt;
        if (day < 10) return std::nullopt; // single digits must be space-padded
    }
    int h, mi, sec;
    if (!read_int(s, 7, 2, h) || !read_int(s, 10, 2, mi) || !read_int(s, 13, 2, sec))
        return std::nullopt;
    if (day < 1 || day > 31 || h > 23 || mi > 59 || sec > 59) return std::nullopt;
    Civil c;
    c.year = year; c.month = *mon; c.day = day; c.hour = h; c.minute = mi; c.second = sec;
    return to_usec(c);
}

std::optional<UsecTime> parse_apache_clf_stamp(std::string_view s) {
    // 15/Jan/2022:06:12:01 +0000
    if (s.size() != 26 || s[2] != '/' || s[6] != '/' || s[11] != ':' || s[14] != ':' ||
        s[17] != ':' || s.substr(20) != " +0000")
        return std::nullopt;
    int d, y, h, mi, sec;
    auto mon = month_from_abbrev(s.substr(3, 3));
    if (!mon) return std::nullopt;
    if (!read_int(s, 0, 2, d) || !read_int(s, 7, 4, y) || !read_int(s, 12, 2, h) ||
        !read_int(s, 15, 2, mi) || !read_int(s, 18, 2, sec))
        return std::nullopt;
    if (d < 1 || d > 31 || h > 23 || mi > 59 || sec > 59) return std::nullopt;
    Civil c;
    c.year = y; c.month = *mon; c.day = d; c.hour = h; c.minute = mi; c.second = sec;
    return to_usec(c);
}

std::optional<UsecTime> parse_apache_error_stamp(std::string_view s) {
    // Sat Jan 15 06:12:01.400000 2022
    if (s.size() != 31 || s[3] != ' ' || s[7] != ' ' || s[10] != ' ' || s[19] != '.' ||
        s[26] != ' ')
        return std::nullopt;
    auto mon = month_from_abbrev(s.substr(4, 3));
    if (!mon) return std::nullopt;
    int d, h, mi, sec, us, y;
    if (!read_int(s, 8, 2, d) || !read_int(s, 11, 2, h) || !read_int(s, 14, 2, mi) ||
        !read_int(s, 17, 2, sec) || !read_int(s, 20, 6, us) || !read_int(s, 27, 4, y))
        return std::nullopt;
    if (s[13] != ':' || s[16] != ':') return std::nullopt;
    if (d < 1 || d > 31 || h > 23 || mi > 59 || sec > 59) return std::nullopt;
    Civil c;
    c.year = y; c.month = *mon; c.day = d; c.hour = h; c.minute = mi; c.second = sec; c.usec = us;
    UsecTime t = to_usec(c);
    if (weekday_abbrev(weekday(t)) != s.substr(0, 3)) return std::nullopt;
    return t;
}

std::optional<UsecTime> parse_openvpn_stamp(std::string_view s) {
    // Sat Jan 15 06:12:01 2022 (day space-padded)
    if (s.size() != 24 || s[3] != ' ' || s[7] != ' ' || s[10] != ' ' || s[19] != ' ')
        return std::nullopt;
    auto mon = month_from_abbrev(s.substr(4, 3));
    if (!mon) return std::nullopt;
    int d, h, mi, sec, y;
    if (s[8] == ' ') {
        if (!read_int(s, 9, 1, d)) return std::nullopt;
    } else {
        if (!read_int(s, 8, 2, d)) return std::nullopt;
        if (d < 10) return std::nullopt;
    }
    if (s[13] != ':' || s[16] != ':') return std::nullopt;
    if (!read_int(s, 11, 2, h) || !read_int(s, 14, 2, mi) || !read_int(s, 17, 2, sec) ||
        !read_int(s, 20, 4, y))
        return std::nullopt;
    if (d < 1 || d > 31 || h > 23 || mi > 59 || sec > 59) return std::nullopt;
    Civil c;
    c.year = y; c.month = *mon; c.day = d; c.hour = h; c.minute = mi; c.second = sec;
    UsecTime t = to_usec(c);
    if (weekday_abbrev(weekday(t)) != s.substr(0, 3)) return std::nullopt;
    return t;
}

std::optional<UsecTime> parse_iso_seconds(std::string_view s) {
    if (s.size() != 19 || s[10] != ' ' || s[13] != ':' || s[16] != ':') return std::nullopt;
    auto date = parse_date(s.substr(0, 10));
    if (!date) return std::nullopt;
    int h, mi, sec;
    if (!read_int(s, 11, 2, h) || !read_int(s, 14, 2, mi) || !read_int(s, 17, 2, sec))
        return std::nullopt;
    if (h > 23 || mi > 59 || sec > 59) return std::nullopt;
    return *date + h * usec_per_hour + mi * usec_per_min + sec * usec_per_sec;
}

std::optional<UsecTime> parse_epoch_millis(std::string_view s) {
    auto dot = s.find('.');
    if (dot == std::string_view::npos || s.size() - dot != 4) return std::nullopt;
    std::int64_t secs = 0;
    auto [p1, e1] = std::from_chars(s.data(), s.data() + dot, secs);
    if (e1 != std::errc() || p1 != s.data() + dot) return std::nullopt;
    int ms;
    if (!read_int(s, dot + 1, 3, ms)) return std::nullopt;
    return secs * usec_per_sec + ms * 1000;
}

} // namespace logbed::timeutil
