#include <doctest.h>

#include "logbed/core/rng.hpp"
#include "logbed/core/time.hpp"

using namespace logbed;
namespace tu = logbed::timeutil;

TEST_CASE("civil day arithmetic round-trips the epoch neighborhood") {
    CHECK(tu::days_from_civil(1970, 1, 1) == 0);
    CHECK(tu::days_from_civil(2022, 1, 15) == 19007);
    int y, m, d;
    tu::civil_from_days(19007, y, m, d);
    CHECK(y == 2022);
    CHECK(m == 1);
    CHECK(d == 15);
}

TEST_CASE("weekdays match the 2022 calendar") {
    // 2022-01-15 was a Saturday, 2022-01-18 a Tuesday, 2022-02-08 a Tuesday.
    CHECK(tu::weekday(*tu::parse_date("2022-01-15")) == 6);
    CHECK(tu::weekday(*tu::parse_date("2022-01-18")) == 2);
    CHECK(tu::weekday(*tu::parse_date("2022-02-08")) == 2);
}

TEST_CASE("stamp renderers produce the documented shapes") {
    const auto t = *tu::parse_date("2022-01-18") + 13 * tu::usec_per_hour +
                   14 * tu::usec_per_min + 31 * tu::usec_per_sec + 123456;
    CHECK(tu::rfc3339(t) == "2022-01-18T13:14:31.123456Z");
    CHECK(tu::syslog_stamp(t) == "Jan 18 13:14:31");
    CHECK(tu::apache_clf_stamp(t) == "18/Jan/2022:13:14:31 +0000");
    CHECK(tu::apache_error_stamp(t) == "Tue Jan 18 13:14:31.123456 2022");
    CHECK(tu::openvpn_stamp(t) == "Tue Jan 18 13:14:31 2022");
    CHECK(tu::iso_seconds(t) == "2022-01-18 13:14:31");
    CHECK(tu::epoch_millis(t) == "1642511671.123");
}

TEST_CASE("single-digit days are space padded in syslog style") {
    const auto t = *tu::parse_date("2022-02-08") + 7 * tu::usec_per_hour;
    CHECK(tu::syslog_stamp(t) == "Feb  8 07:00:00");
    CHECK(*tu::parse_syslog_stamp("Feb  8 07:00:00", 2022) == t);
    CHECK(!tu::parse_syslog_stamp("Feb 8 07:00:00", 2022).has_value());
    CHECK(!tu::parse_syslog_stamp("Feb 08 07:00:00", 2022).has_value());
}

TEST_CASE("every renderer has an exact inverse") {
    rng::Stream s(2024);
    const auto lo = *tu::parse_date("2022-01-01");
    const auto hi = *tu::parse_date("2022-12-31");
    for (int i = 0; i < 2000; ++i) {
        tu::UsecTime t = s.uniform_int(lo, hi);
        tu::UsecTime tsec = (t / tu::usec_per_sec) * tu::usec_per_sec;
        tu::UsecTime tms = (t / 1000) * 1000;
        CHECK(*tu::parse_rfc3339(tu::rfc3339(t)) == t);
        CHECK(*tu::parse_syslog_stamp(tu::syslog_stamp(t), 2022) == tsec);
        CHECK(*tu::parse_apache_clf_stamp(tu::apache_clf_stamp(t)) == tsec);
        CHECK(*tu::parse_apache_error_stamp(tu::apache_error_stamp(t)) == t);
        CHECK(*tu::parse_openvpn_stamp(tu::openvpn_stamp(t)) == tsec);
        CHECK(*tu::parse_iso_seconds(tu::iso_seconds(t)) == tsec);
        CHECK(*tu::parse_epoch_millis(tu::epoch_millis(t)) == tms);
    }
}

TEST_CASE("clock strings parse to minutes") {
    CHECK(*tu::parse_clock_minutes("05:00") == 300);
    CHECK(*tu::parse_clock_minutes("22:00") == 1320);
    CHECK(!tu::parse_clock_minutes("24:00").has_value());
    CHECK(!tu::parse_clock_minutes("5:00").has_value());
}

TEST_CASE("malformed stamps are rejected") {
    CHECK(!tu::parse_rfc3339("2022-01-18 13:14:31.123456Z").has_value());
    CHECK(!tu::parse_apache_clf_stamp("18/Jan/2022:13:14:31 +0100").has_value());
    CHECK(!tu::parse_apache_error_stamp("Mon Jan 18 13:14:31.123456 2022").has_value());
    CHECK(!tu::parse_date("2022-1-15").has_value());
}
