#include <doctest.h>

#include <nlohmann/json.hpp>

#include "format_samplers.hpp"
#include "logbed/core/time.hpp"
#include "logbed/logsynth/format.hpp"
#include "logbed/logsynth/lines.hpp"

using namespace logbed;
using namespace logbed::logsynth;
namespace tu = logbed::timeutil;

namespace {
tu::UsecTime at(const char* date, int h, int m, int s) {
    return *tu::parse_date(date) + h * tu::usec_per_hour + m * tu::usec_per_min +
           s * tu::usec_per_sec;
}
} // namespace

TEST_CASE("su escalation lines render byte-exact") {
    const auto t = at("2022-01-18", 13, 14, 31);
    CHECK(lines::syslog(t, "intranet-server", "su", 28816,
                        "Successful su for phopkins by www-data") ==
          "Jan 18 13:14:31 intranet-server su[28816]: Successful su for phopkins by www-data");
    CHECK(lines::syslog(t, "intranet-server", "su", 28816, "+ /dev/pts/1 www-data:phopkins") ==
          "Jan 18 13:14:31 intranet-server su[28816]: + /dev/pts/1 www-data:phopkins");
    CHECK(lines::syslog(t, "intranet-server", "su", 28816,
                        "pam_unix(su:session): session opened for user phopkins by (uid=33)") ==
          "Jan 18 13:14:31 intranet-server su[28816]: pam_unix(su:session): session opened for "
          "user phopkins by (uid=33)");
    CHECK(lines::syslog(t, "intranet-server", "systemd-logind", 1011,
                        "New session c1 of user phopkins.") ==
          "Jan 18 13:14:31 intranet-server systemd-logind[1011]: New session c1 of user "
          "phopkins.");
    CHECK(lines::syslog(t, "intranet-server", "systemd", 0,
                        "pam_unix(systemd-user:session): session opened for user phopkins by "
                        "(uid=0)") ==
          "Jan 18 13:14:31 intranet-server systemd: pam_unix(systemd-user:session): session "
          "opened for user phopkins by (uid=0)");
    CHECK(lines::sudo_syslog(at("2022-01-18", 13, 14, 41), "intranet-server", "phopkins",
                             "pts/1", "root", "list") ==
          "Jan 18 13:14:41 intranet-server sudo: phopkins : TTY=pts/1 ; USER=root ; "
          "COMMAND=list");
    CHECK(lines::sudo_syslog(at("2022-01-18", 13, 14, 43), "intranet-server", "phopkins",
                             "pts/1", "root", "/bin/ls -laR /root/") ==
          "Jan 18 13:14:43 intranet-server sudo: phopkins : TTY=pts/1 ; USER=root ; "
          "COMMAND=/bin/ls -laR /root/");
}

TEST_CASE("short sudo usernames are right-justified and days space-padded") {
    CHECK(lines::sudo_syslog(at("2022-02-08", 7, 31, 2), "intranet-server", "jward", "pts/0",
                             "root", "list") ==
          "Feb  8 07:31:02 intranet-server sudo:    jward : TTY=pts/0 ; USER=root ; "
          "COMMAND=list");
}

TEST_CASE("representative lines of each format parse to their fields") {
    const std::string access =
        "192.168.164.7 - jdoe [15/Jan/2022:06:12:01 +0000] \"GET /wp-login.php HTTP/1.1\" 200 "
        "4523 \"-\" \"Mozilla/5.0 (X11; Linux x86_64)\"";
    auto ev = parse_line(Format::ApacheAccess, access, 2022);
    REQUIRE(ev.ok);
    CHECK(ev.get("client") == "192.168.164.7");
    CHECK(ev.get("path") == "/wp-login.php");
    CHECK(ev.get("status") == "200");
    CHECK(render_line(Format::ApacheAccess, ev) == access);

    const std::string dns = "Jan 15 06:12:01 firewall dnsmasq[812]: query[A] "
                            "cloud.mycompany.com from 192.168.164.7";
    ev = parse_line(Format::DnsQuery, dns, 2022);
    REQUIRE(ev.ok);
    CHECK(ev.get("op") == "query");
    CHECK(ev.get("qtype") == "A");
    CHECK(ev.get("name") == "cloud.mycompany.com");
    CHECK(ev.get("client") == "192.168.164.7");
    CHECK(render_line(Format::DnsQuery, ev) == dns);

    const std::string audit =
        "type=EXECVE msg=audit(1642226521.400:8123): argc=3 a0=\"sh\" a1=\"-c\" a2=\"cat "
        "/etc/passwd\"";
    ev = parse_line(Format::AuditKv, audit, 2022);
    REQUIRE(ev.ok);
    CHECK(ev.get("serial") == "8123");
    CHECK(ev.get("a2") == "cat /etc/passwd");
    CHECK(ev.ts == 1642226521400000LL);
    CHECK(render_line(Format::AuditKv, ev) == audit);

    const std::string vpn = "Sat Jan 15 06:10:02 2022 203.0.113.55:49213 [jward] Peer "
                            "Connection Initiated";
    ev = parse_line(Format::Vpn, vpn, 2022);
    REQUIRE(ev.ok);
    CHECK(ev.get("client") == "203.0.113.55:49213");
    CHECK(ev.get("user") == "jward");
    CHECK(render_line(Format::Vpn, ev) == vpn);

    const std::string mail = "2022-01-15 06:12:03 1n8aBc-0007qA-3x <= jdoe@mycompany.com "
                             "H=pc-jdoe [192.168.164.7] S=2843 id=<m1@mycompany.com>";
    ev = parse_line(Format::Mail, mail, 2022);
    REQUIRE(ev.ok);
    CHECK(ev.get("op") == "arrival");
    CHECK(ev.get("addr") == "jdoe@mycompany.com");
    CHECK(render_line(Format::Mail, ev) == mail);
}

TEST_CASE("malformed lines fail the parse instead of guessing") {
    CHECK(!parse_line(Format::ApacheAccess, "not a log line", 2022).ok);
    CHECK(!parse_line(Format::DnsQuery,
                      "Jan 15 06:12:01 firewall sshd[812]: query[A] x.com from 1.2.3.4", 2022)
               .ok);
    CHECK(!parse_line(Format::AuditKv, "type=SYSCALL msg=audit(164222.4:12) pid=1", 2022).ok);
    CHECK(!parse_line(Format::MonitoringCsv, "2022-01-15 06:12:00,1.0,2.0", 2022).ok);
    CHECK(!parse_line(Format::Mail, "2022-01-15 06:12:03", 2022).ok);
    CHECK(!parse_line(Format::Vpn, "Sat Jan 15 06:10:02 2022 ", 2022).ok);
}

TEST_CASE("random tuples survive render and reparse for every text format") {
    rng::Stream r(20240117);
    for (Format f : {Format::ApacheAccess, Format::ApacheError, Format::SyslogAuth,
                     Format::DnsQuery, Format::AuditKv, Format::MonitoringCsv, Format::Vpn,
                     Format::Mail, Format::Horde}) {
        for (int i = 0; i < 1000; ++i) {
            const ParsedLine tuple = sampler::random_tuple(f, r);
            const std::string line = render_line(f, tuple);
            const ParsedLine back = parse_line(f, line, 2022);
            REQUIRE_MESSAGE(back.ok, format_id(f), ": ", line);
            CHECK(back.ts == tuple.ts);
            REQUIRE(back.fields.size() == tuple.fields.size());
            for (std::size_t k = 0; k < tuple.fields.size(); ++k) {
                CHECK(back.fields[k].key == tuple.fields[k].key);
                CHECK(back.fields[k].value == tuple.fields[k].value);
            }
            CHECK(render_line(f, back) == line);
        }
    }
}

TEST_CASE("trace records round-trip through json") {
    const auto t = at("2022-01-15", 8, 0, 1) + 400000;
    const std::string rec = lines::trace_step(t, "webmail", "webmail:inbox", "webmail:compose",
                                              "open_compose");
    auto ev = parse_line(Format::Trace, rec, 2022);
    REQUIRE(ev.ok);
    CHECK(ev.ts == t);
    CHECK(ev.get("machine") == "webmail");
    CHECK(ev.get("action") == "open_compose");
    CHECK(render_line(Format::Trace, ev) == rec);

    nlohmann::json facts = {{"tool", "wpscan"}, {"mode", "passive"}};
    const std::string rec2 =
        lines::attack_record(t, t + 90 * tu::usec_per_sec, "wpscan", facts);
    ev = parse_line(Format::Trace, rec2, 2022);
    REQUIRE(ev.ok);
    CHECK(ev.get("step") == "wpscan");
    CHECK(ev.get("facts.mode") == "passive");
    CHECK(render_line(Format::Trace, ev) == rec2);
}

TEST_CASE("format ids map both ways") {
    CHECK(format_id(Format::ApacheAccess) == std::string("apache-access"));
    CHECK(*format_from_id("audit-kv") == Format::AuditKv);
    CHECK(!format_from_id("pcap").has_value());
}
