#pragma once

// Random but grammar-respecting field tuples for every line format.
// Shared between the unit tests and the acceptance checks.

#include <string>

#include "logbed/core/rng.hpp"
#include "logbed/core/text.hpp"
#include "logbed/core/time.hpp"
#include "logbed/logsynth/format.hpp"
#include "logbed/logsynth/lines.hpp"

namespace sampler {

using logbed::logsynth::Field;
using logbed::logsynth::Format;
using logbed::logsynth::ParsedLine;
namespace rng = logbed::rng;
namespace tu = logbed::timeutil;

inline std::string pick(rng::Stream& r, const std::vector<std::string>& v) {
    return v[r.index(v.size())];
}

inline std::string word(rng::Stream& r, int lo = 3, int hi = 10) {
    static const char* alpha = "abcdefghijklmnopqrstuvwxyz0123456789";
    const int n = static_cast<int>(r.uniform_int(lo, hi));
    std::string out;
    for (int i = 0; i < n; ++i) out += alpha[r.index(26 + (i ? 10 : 0))];
    return out;
}

inline std::string sentence(rng::Stream& r, int words = 4) {
    std::string out;
    for (int i = 0; i < words; ++i) {
        if (i) out += ' ';
        out += word(r);
    }
    return out;
}

inline std::string ip4(rng::Stream& r) {
    return std::to_string(r.uniform_int(1, 223)) + "." + std::to_string(r.uniform_int(0, 255)) +
           "." + std::to_string(r.uniform_int(0, 255)) + "." +
           std::to_string(r.uniform_int(1, 254));
}

inline std::string fqdn(rng::Stream& r) {
    return word(r) + "." + word(r) + "." + pick(r, {"com", "org", "net"});
}

inline tu::UsecTime stamp(rng::Stream& r) {
    static const auto lo = *tu::parse_date("2022-01-01");
    static const auto hi = *tu::parse_date("2022-12-30");
    return r.uniform_int(lo, hi);
}

inline ParsedLine random_tuple(Format f, rng::Stream& r) {
    ParsedLine ev;
    ev.ok = true;
    ev.ts = stamp(r);
    switch (f) {
        case Format::ApacheAccess: {
            ev.ts = (ev.ts / tu::usec_per_sec) * tu::usec_per_sec;
            std::string path = "/" + word(r);
            if (r.chance(0.4)) path += "/" + word(r) + ".php";
            if (r.chance(0.3)) path += "?" + word(r) + "=" + word(r) + "%20" + word(r);
            ev.fields = {{"client", ip4(r)},
                         {"user", r.chance(0.5) ? "-" : word(r)},
                         {"method", pick(r, {"GET", "POST", "HEAD"})},
                         {"path", path},
                         {"proto", pick(r, {"HTTP/1.1", "HTTP/1.0"})},
                         {"status", pick(r, {"200", "301", "403", "404", "500"})},
                         {"bytes", std::to_string(r.uniform_int(0, 99999))},
                         {"referer", r.chance(0.5) ? "-" : "http://" + fqdn(r) + "/"},
                         {"agent", "Mozilla/5.0 (" + sentence(r, 2) + ")"}};
            break;
        }
        case Format::ApacheError:
            ev.fields = {{"module", pick(r, {"php", "core", "authz_core", "mpm_prefork"})},
                         {"level", pick(r, {"warn", "error", "notice"})},
                         {"pid", std::to_string(r.uniform_int(100, 99999))},
                         {"client", ip4(r) + ":" + std::to_string(r.uniform_int(1024, 65535))},
                         {"message", sentence(r, 6)}};
            break;
        case Format::SyslogAuth: {
            ev.ts = (ev.ts / tu::usec_per_sec) * tu::usec_per_sec;
            ev.fields = {{"host", word(r)},
                         {"proc", pick(r, {"sshd", "su", "sudo", "CRON", "systemd", "kernel",
                                           "systemd-logind"})}};
            if (r.chance(0.6)) ev.fields.push_back({"pid", std::to_string(r.uniform_int(1, 65535))});
            ev.fields.push_back({"message", sentence(r, 5)});
            break;
        }
        case Format::DnsQuery: {
            ev.ts = (ev.ts / tu::usec_per_sec) * tu::usec_per_sec;
            ev.fields = {{"host", word(r)}, {"pid", std::to_string(r.uniform_int(100, 9999))}};
            ParsedLine tmp = ev;
            if (r.chance(0.6)) {
                tmp.set("op", "query");
                tmp.set("qtype", pick(r, {"A", "AAAA", "PTR", "MX", "TXT"}));
                tmp.set("name", fqdn(r));
                tmp.set("client", ip4(r));
            } else if (r.chance(0.5)) {
                tmp.set("op", "reply");
                tmp.set("name", fqdn(r));
                tmp.set("result", r.chance(0.8) ? ip4(r) : "NXDOMAIN");
            } else {
                tmp.set("op", "forwarded");
                tmp.set("name", fqdn(r));
                tmp.set("upstream", ip4(r));
            }
            ev = tmp;
            break;
        }
        case Format::AuditKv: {
            ev.ts = (ev.ts / 1000) * 1000;
            ev.fields = {{"type", pick(r, {"SYSCALL", "EXECVE", "USER_ACCT", "CRED_ACQ"})},
                         {"serial", std::to_string(r.uniform_int(1, 1000000))}};
            ev.fields.push_back({"pid", std::to_string(r.uniform_int(1, 65535))});
            ev.fields.push_back({"uid", std::to_string(r.uniform_int(0, 1000))});
            if (r.chance(0.7)) ev.fields.push_back({"comm", word(r)});
            if (r.chance(0.7)) ev.fields.push_back({"exe", "/usr/bin/" + word(r)});
            if (r.chance(0.5)) ev.fields.push_back({"a0", word(r)});
            if (r.chance(0.5)) ev.fields.push_back({"a1", sentence(r, 3)});
            if (r.chance(0.5)) ev.fields.push_back({"key", word(r)});
            ev.fields.push_back({"res", pick(r, {"success", "failed"})});
            break;
        }
        case Format::MonitoringCsv: {
            ev.ts = (ev.ts / tu::usec_per_sec) * tu::usec_per_sec;
            using logbed::text::fixed2;
            const double sys = r.uniform_real(0, 30), usr = r.uniform_real(0, 60);
            ev.fields = {{"cpu_system", fixed2(sys)},
                         {"cpu_user", fixed2(usr)},
                         {"cpu_total", fixed2(sys + usr)},
                         {"mem_used", fixed2(r.uniform_real(100, 4000))},
                         {"mem_free", fixed2(r.uniform_real(100, 4000))},
                         {"disk", fixed2(r.uniform_real(5, 95))},
                         {"net_in", fixed2(r.uniform_real(0, 500))},
                         {"net_out", fixed2(r.uniform_real(0, 500))}};
            break;
        }
        case Format::Vpn: {
            ev.ts = (ev.ts / tu::usec_per_sec) * tu::usec_per_sec;
            if (r.chance(0.7)) {
                ev.fields = {
                    {"client", ip4(r) + ":" + std::to_string(r.uniform_int(1024, 65535))},
                    {"user", r.chance(0.3) ? "-" : word(r)},
                    {"message", sentence(r, 4)}};
            } else {
                ev.fields = {{"message", sentence(r, 4)}};
            }
            break;
        }
        case Format::Mail: {
            ev.ts = (ev.ts / tu::usec_per_sec) * tu::usec_per_sec;
            const auto id = logbed::logsynth::lines::queue_id(
                static_cast<std::uint64_t>(r.uniform_int(0, 1000000)));
            const double mode = r.unit();
            if (mode < 0.3) {
                ev.fields = {{"id", id},
                             {"op", "arrival"},
                             {"addr", word(r) + "@" + fqdn(r)},
                             {"helo", fqdn(r)},
                             {"ip", ip4(r)},
                             {"size", std::to_string(r.uniform_int(300, 100000))},
                             {"mid", "<" + word(r) + "@" + fqdn(r) + ">"}};
            } else if (mode < 0.6) {
                ev.fields = {{"id", id},
                             {"op", "delivery"},
                             {"addr", word(r) + "@" + fqdn(r)},
                             {"router", pick(r, {"dnslookup", "localuser"})},
                             {"transport", pick(r, {"remote_smtp", "local_delivery"})},
                             {"mx", fqdn(r)},
                             {"ip", ip4(r)},
                             {"size", std::to_string(r.uniform_int(300, 100000))}};
            } else if (mode < 0.8) {
                ev.fields = {{"id", id}, {"op", "completed"}};
            } else {
                ev.fields = {{"op", "daemon"},
                             {"message", pick(r, {"Start", "End"}) + " queue run: pid=" +
                                             std::to_string(r.uniform_int(100, 65535))}};
            }
            break;
        }
        case Format::Horde:
            ev.ts = (ev.ts / tu::usec_per_sec) * tu::usec_per_sec;
            ev.fields = {{"level", pick(r, {"INFO", "NOTICE", "WARN"})},
                         {"app", pick(r, {"imp", "horde", "turba"})},
                         {"message", "Login success for " + word(r) + " [" + ip4(r) + "] to " +
                                         word(r)}};
            break;
        case Format::Trace:
            // covered via builder round-trips, no free-form tuples
            break;
    }
    return ev;
}

} // namespace sampler
