#include <algorithm>
#include <cstdio>

#include "logbed/behavior/runtime.hpp"
#include "logbed/logsynth/lines.hpp"

namespace logbed::behavior {

namespace tu = logbed::timeutil;
namespace lines = logbed::logsynth::lines;

namespace {

double clamp_lo(double v, double lo) { return v < lo ? lo : v; }

struct TextureLine {
    const char* proc;
    bool fresh_pid; // otherwise a stable daemon pid, 0 meaning none at all
    const char* message;
};

const std::vector<TextureLine>& syslog_texture() {
    static const std::vector<TextureLine> pool = {
        {"systemd", false, "Starting Daily apt download activities..."},
        {"systemd", false, "Started Daily apt download activities."},
        {"systemd", false, "Starting Cleanup of Temporary Directories..."},
        {"systemd", false, "Started Cleanup of Temporary Directories."},
        {"CRON", true, "(root) CMD (command -v debian-sa1 > /dev/null && debian-sa1 1 1)"},
        {"dhclient", false, "DHCPREQUEST on eth0 to 255.255.255.255 port 67"},
    };
    return pool;
}

const std::vector<TextureLine>& journal_texture() {
    static const std::vector<TextureLine> pool = {
        {"systemd", false, "Starting Message of the Day..."},
        {"systemd", false, "Started Message of the Day."},
        {"systemd", false, "Reloading."},
        {"systemd", false, "Starting Security Auditing Service..."},
        {"systemd", false, "Started Security Auditing Service."},
    };
    return pool;
}

} // namespace

struct BackgroundRuntime::Metrics {
    const model::Host* host = nullptr;
    rng::Stream rng;
    double sys = 3.2;
    double user = 8.5;
    double mem_used = 41.0;
    double mem_free = 52.0;
    double disk = 63.4;
    double net_in = 34.0;
    double net_out = 12.0;

    void advance() {
        auto ou = [this](double& x, double mu, double sigma) {
            x += 0.25 * (mu - x) + sigma * rng.gauss();
            x = clamp_lo(x, 0.1);
        };
        ou(sys, 3.2, 0.45);
        ou(user, 8.5, 1.3);
        ou(mem_used, 41.0, 0.35);
        ou(mem_free, 52.0, 0.35);
        ou(disk, 63.4, 0.03);
        ou(net_in, 34.0, 7.0);
        ou(net_out, 12.0, 3.0);
    }
};

BackgroundRuntime::BackgroundRuntime(sim::World& w) : w_(w) {}
BackgroundRuntime::~BackgroundRuntime() = default;

void BackgroundRuntime::install() {
    const auto& inst = w_.inst;
    const auto start = inst.start;
    const auto end = inst.end;

    for (const auto& h : inst.hosts) {
        const auto hash = rng::fnv1a64(h.hostname);

        // hourly cron session, offset stable per host
        if (w_.host_has(h.hostname, "auth.log")) {
            const bool with_audit = w_.host_has(h.hostname, "audit/audit.log");
            const auto offset = (hash % 60) * tu::usec_per_min + ((hash >> 8) % 60) * tu::usec_per_sec;
            for (auto t = start + offset; t < end; t += tu::usec_per_hour) {
                const model::Host* hp = &h;
                w_.engine.at(t, [this, hp, with_audit] { cron_job(*hp, with_audit); });
            }
        }

        if (w_.host_has(h.hostname, "syslog")) {
            // the daily HUP that drives rotation, plus periodic daemon chatter
            for (int d = 1; d < inst.days(); ++d) {
                const auto t = start + d * tu::usec_per_day + (hash % 4 + 1) * tu::usec_per_sec;
                const model::Host* hp = &h;
                w_.engine.at(t, [this, hp] {
                    const auto pid = w_.stable_pid(hp->hostname, "rsyslogd");
                    w_.line(*hp, "syslog",
                            lines::syslog(w_.now(), hp->hostname, "rsyslogd", 0,
                                          "[origin software=\"rsyslogd\" swVersion=\"8.32.0\" "
                                          "x-pid=\"" + std::to_string(pid) +
                                          "\" x-info=\"http://www.rsyslog.com\"] rsyslogd was "
                                          "HUPed"));
                });
            }
            auto& r = w_.stream("bg/" + h.hostname + "/syslog");
            for (auto t = start + r.uniform_int(120, 3600) * tu::usec_per_sec; t < end;
                 t += r.uniform_int(3600, 3 * 3600) * tu::usec_per_sec) {
                const model::Host* hp = &h;
                w_.engine.at(t, [this, hp] {
                    auto& rr = w_.stream("bg/" + hp->hostname + "/syslog-pick");
                    const auto& tl = syslog_texture()[rr.index(syslog_texture().size())];
                    const int pid = tl.fresh_pid ? w_.fresh_pid(hp->hostname)
                                                 : (std::string(tl.proc) == "systemd"
                                                        ? 1
                                                        : w_.stable_pid(hp->hostname, tl.proc));
                    w_.line(*hp, "syslog",
                            lines::syslog(w_.now(), hp->hostname, tl.proc, pid, tl.message));
                });
            }
        }

        if (w_.host_has(h.hostname, "journal.log")) {
            auto& r = w_.stream("bg/" + h.hostname + "/journal");
            for (auto t = start + r.uniform_int(300, 7200) * tu::usec_per_sec; t < end;
                 t += r.uniform_int(2 * 3600, 5 * 3600) * tu::usec_per_sec) {
                const model::Host* hp = &h;
                w_.engine.at(t, [this, hp] {
                    auto& rr = w_.stream("bg/" + hp->hostname + "/journal-pick");
                    const auto& tl = journal_texture()[rr.index(journal_texture().size())];
                    w_.line(*hp, "journal.log",
                            lines::syslog(w_.now(), hp->hostname, tl.proc, 1, tl.message));
                });
            }
        }

        if (w_.host_has(h.hostname, "exim4/mainlog")) {
            for (auto t = start + (hash % 1800) * tu::usec_per_sec; t < end;
                 t += 30 * tu::usec_per_min) {
                const model::Host* hp = &h;
                w_.engine.at(t, [this, hp] {
                    const int pid = w_.fresh_pid(hp->hostname);
                    w_.line(*hp, "exim4/mainlog",
                            lines::mail_daemon(w_.now(), "Start queue run: pid=" +
                                                             std::to_string(pid)));
                    auto& rr = w_.stream("bg/" + hp->hostname + "/queue");
                    w_.engine.after(rr.uniform_int(1, 6) * tu::usec_per_sec, [this, hp, pid] {
                        w_.line(*hp, "exim4/mainlog",
                                lines::mail_daemon(w_.now(), "End queue run: pid=" +
                                                                 std::to_string(pid)));
                    });
                });
            }
            // low-volume companion facilities
            auto& r = w_.stream("bg/" + h.hostname + "/mailfac");
            for (int d = 0; d < inst.days(); ++d) {
                const auto day0 = start + d * tu::usec_per_day;
                const model::Host* hp = &h;
                w_.engine.at(day0 + r.uniform_int(3600, 82800) * tu::usec_per_sec, [this, hp] {
                    w_.line(*hp, "mail.warn",
                            lines::syslog(w_.now(), hp->hostname, "dovecot", 0,
                                          "imap-login: Warning: Auth process not responding, "
                                          "delayed sending initial response (greeting)"));
                });
                w_.engine.at(day0 + r.uniform_int(3600, 82800) * tu::usec_per_sec, [this, hp] {
                    const std::string gw =
                        hp->zone == "dmz" ? w_.firewall->addr : "203.0.113.1";
                    w_.line(*hp, "messages",
                            lines::syslog(w_.now(), hp->hostname, "dhclient",
                                          w_.stable_pid(hp->hostname, "dhclient"),
                                          "DHCPACK of " + hp->addr + " from " + gw));
                });
                w_.engine.at(day0 + r.uniform_int(3600, 82800) * tu::usec_per_sec, [this, hp] {
                    w_.line(*hp, "user.log",
                            lines::syslog(w_.now(), hp->hostname, "HORDE", 0,
                                          "[imp] Registered application inventory refreshed"));
                });
            }
        }

        if (h.role == "firewall") {
            auto& r = w_.stream("bg/" + h.hostname + "/kern");
            for (auto t = start + r.uniform_int(30, 2400) * tu::usec_per_sec; t < end;
                 t += r.uniform_int(900, 3600) * tu::usec_per_sec) {
                const model::Host* hp = &h;
                w_.engine.at(t, [this, hp] {
                    auto& rr = w_.stream("bg/kern-drops");
                    static const int ports[] = {23, 445, 3389, 8080, 2323, 5060, 1433};
                    const char* net = rr.chance(0.5) ? "203.0.113." : "198.51.100.";
                    const std::string src = net + std::to_string(rr.uniform_int(1, 254));
                    char up[32];
                    std::snprintf(up, sizeof up, "%.6f",
                                  73000.0 +
                                      static_cast<double>(w_.now() - w_.inst.start) / 1e6);
                    w_.line(*hp, "kern.log",
                            lines::syslog(w_.now(), hp->hostname, "kernel", 0,
                                          "[" + std::string(up) + "] Shorewall:net2fw:DROP:IN=eth0 "
                                          "OUT= SRC=" + src + " DST=" + hp->addr +
                                          " LEN=40 TOS=0x00 PREC=0x00 TTL=" +
                                          std::to_string(rr.uniform_int(38, 244)) + " ID=" +
                                          std::to_string(rr.uniform_int(1000, 65000)) +
                                          " PROTO=TCP SPT=" +
                                          std::to_string(rr.uniform_int(1024, 65000)) + " DPT=" +
                                          std::to_string(ports[rr.index(7)]) +
                                          " WINDOW=65535 RES=0x00 SYN URGP=0"));
                });
            }
        }

        if (w_.host_has(h.hostname, "apache2/access.log")) {
            // one grumble a day on the error channel
            auto& r = w_.stream("bg/" + h.hostname + "/apacheerr");
            for (int d = 0; d < inst.days(); ++d) {
                const auto t =
                    start + d * tu::usec_per_day + r.uniform_int(7200, 79200) * tu::usec_per_sec;
                const model::Host* hp = &h;
                w_.engine.at(t, [this, hp] {
                    auto& rr = w_.stream("bg/apache-noise");
                    w_.line(*hp, "apache2/error.log",
                            lines::apache_error(w_.now(), "authz_core", "error",
                                                w_.stable_pid(hp->hostname, "apache2"),
                                                w_.intranet_server->addr,
                                                static_cast<int>(rr.uniform_int(32768, 60999)),
                                                "AH01630: client denied by server configuration: "
                                                "/var/www/html/server-status"));
                });
            }
        }
    }

    // uptime probe sweeps every ten minutes, fired from the intranet box
    {
        std::vector<const model::Host*> probed;
        for (const auto& h : inst.hosts)
            if (w_.host_has(h.hostname, "apache2/access.log")) probed.push_back(&h);
        for (auto t = start + 30 * tu::usec_per_sec; t < end; t += 10 * tu::usec_per_min) {
            w_.engine.at(t, [this, probed] {
                auto& r = w_.stream("bg/probe");
                for (const auto* hp : probed)
                    w_.line(*hp, "apache2/access.log",
                            lines::apache_access(w_.now(), w_.intranet_server->addr, "-", "GET",
                                                 "/status", 200, 360 + r.index(64), "-",
                                                 "monitoring-plugin/2.2"));
            });
        }
    }

    // the metrics feed
    for (const auto& h : inst.hosts) {
        if (!w_.host_has(h.hostname, "monitoring.csv")) continue;
        auto m = std::make_unique<Metrics>();
        m->host = &h;
        m->rng = rng::derive(inst.seed, "bg/" + h.hostname + "/metrics");
        Metrics* mp = m.get();
        metrics_.push_back(std::move(m));
        const bool crack_host = h.role == "intranet-server";
        for (auto t = start; t < end; t += tu::usec_per_min) {
            const model::Host* hp = &h;
            w_.engine.at(t, [this, hp, mp, crack_host] { monitor_tick(*hp, *mp, crack_host); });
        }
    }

    // infrastructure lookups carry the resolver's baseline volume
    {
        auto& r = w_.stream("infra-dns");
        for (int d = 0; d < inst.days(); ++d) {
            const auto n = static_cast<int>(
                inst.behavior.infra_dns_per_day * r.uniform_real(0.92, 1.08) + 0.5);
            const auto day0 = start + d * tu::usec_per_day;
            for (int k = 0; k < n; ++k) {
                const auto t = day0 + r.uniform_int(0, tu::usec_per_day / tu::usec_per_sec - 1) *
                                          tu::usec_per_sec +
                               r.uniform_int(0, 999999);
                w_.engine.at(t, [this] { infra_query(); });
            }
        }
    }
}

void BackgroundRuntime::cron_job(const model::Host& h, bool with_audit) {
    const int pid = w_.fresh_pid(h.hostname);
    w_.line(h, "auth.log",
            lines::syslog(w_.now(), h.hostname, "CRON", pid,
                          "pam_unix(cron:session): session opened for user root by (uid=0)"));
    if (with_audit) {
        const std::string p = std::to_string(pid);
        w_.audit_event(h, "USER_ACCT",
                       {{"pid", p}, {"uid", "0"}, {"auid", "0"}, {"ses", "4294967295"},
                        {"acct", "root"}, {"exe", "/usr/sbin/cron"}, {"terminal", "cron"},
                        {"res", "success"}},
                       "normal");
        w_.audit_event(h, "CRED_ACQ",
                       {{"pid", p}, {"uid", "0"}, {"auid", "0"}, {"ses", "4294967295"},
                        {"acct", "root"}, {"exe", "/usr/sbin/cron"}, {"terminal", "cron"},
                        {"res", "success"}},
                       "normal");
    }
    auto& r = w_.stream("bg/cron");
    const model::Host* hp = &h;
    w_.engine.after(r.uniform_int(1, 25) * tu::usec_per_sec, [this, hp, pid, with_audit] {
        w_.line(*hp, "auth.log",
                lines::syslog(w_.now(), hp->hostname, "CRON", pid,
                              "pam_unix(cron:session): session closed for user root"));
        if (with_audit)
            w_.audit_event(*hp, "CRED_DISP",
                           {{"pid", std::to_string(pid)}, {"uid", "0"}, {"auid", "0"},
                            {"ses", "4294967295"}, {"acct", "root"}, {"exe", "/usr/sbin/cron"},
                            {"terminal", "cron"}, {"res", "success"}},
                           "normal");
    });
}

void BackgroundRuntime::monitor_tick(const model::Host& h, Metrics& m, bool crack_host) {
    m.advance();
    double sys = m.sys;
    double user = m.user;
    std::string tag = "normal";
    if (crack_host && w_.crack_end > 0 && w_.now() >= w_.crack_start &&
        w_.now() <= w_.crack_end) {
        // the login brute force saturates the web stack
        sys += 46.0;
        user += 21.0;
        tag = "crack";
    }
    w_.line(h, "monitoring.csv",
            lines::metrics(w_.now(), sys, user, m.mem_used, m.mem_free, m.disk, m.net_in,
                           m.net_out),
            tag);
}

void BackgroundRuntime::infra_query() {
    auto& r = w_.stream("infra-dns");
    static const std::vector<std::string> generic = {
        "ntp.ubuntu.com",         "connectivity-check.ubuntu.com",
        "archive.ubuntu.com",     "security.ubuntu.com",
        "ocsp.digicert.com",      "pool.ntp.org",
        "keyserver.ubuntu.com",   "motd.ubuntu.com"};
    const auto* h = w_.org_servers[r.index(w_.org_servers.size())];
    std::vector<std::string> names = generic;
    if (h->role == "mail-server") {
        names.push_back("zen.spamhaus.org");
        names.push_back("database.clamav.net");
    } else if (h->role == "intranet-server") {
        names.push_back("api.wordpress.org");
        names.push_back("downloads.wordpress.org");
    } else if (h->role == "cloud-share") {
        names.push_back("updates.owncloud.com");
    }
    w_.dns_query(h->addr, h->zone, names[r.index(names.size())], "A", "normal");
}

} // namespace logbed::behavior
