#include "logbed/attack/execute.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <set>
#include <string>
#include <vector>

#include "logbed/core/hashio.hpp"
#include "logbed/core/text.hpp"
#include "logbed/logsynth/lines.hpp"

namespace logbed::attack {

namespace tu = timeutil;
using logsynth::lines::apache_access;
using logsynth::lines::apache_error;
using logsynth::lines::sudo_syslog;
using logsynth::lines::syslog;
using model::Host;

namespace {

const char* kNmapAgent = "Mozilla/5.0 (compatible; Nmap Scripting Engine; "
                         "https://nmap.org/book/nse.html)";
const char* kWpscanAgent = "WPScan v3.8.22 (https://wpscan.com/wordpress-security-scanner)";
const char* kDirbAgent = "Mozilla/4.0 (compatible; MSIE 6.0; Windows NT 5.1)";
const char* kAttackerAgent =
    "Mozilla/5.0 (X11; Linux x86_64; rv:78.0) Gecko/20100101 Firefox/78.0";

std::string urlencode(const std::string& s) {
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~' || c == '/') {
            out.push_back(static_cast<char>(c));
        } else {
            char buf[4];
            std::snprintf(buf, sizeof buf, "%%%02X", c);
            out += buf;
        }
    }
    return out;
}

std::string reverse_name(const std::string& addr) {
    auto parts = text::split(addr, '.');
    std::reverse(parts.begin(), parts.end());
    return text::join(parts, ".") + ".in-addr.arpa";
}

// 404 body sizes barely move; tie the jitter to the path
std::int64_t miss_bytes(const std::string& path) {
    return 275 + static_cast<std::int64_t>(rng::fnv1a64(path) % 25);
}

std::vector<std::string> dirb_wordlist(bool recursive, bool case_insensitive) {
    static const char* prefixes[] = {"",     "old_",   "new_",  "test_", "dev_", "bak_",
                                     "tmp_", "admin_", "web_",  "site_", "my_",  "wp-"};
    static const char* bases[] = {
        "admin",   "archive", "assets",  "backup",  "cache",   "cgi-bin", "config",
        "css",     "data",    "db",      "docs",    "files",   "images",  "img",
        "include", "includes", "index",  "info",    "js",      "lib",     "license",
        "login",   "logs",    "mail",    "media",   "news",    "old",     "pages",
        "private", "public",  "readme",  "scripts", "secure",  "server",  "shop",
        "site",    "sql",     "stats",   "temp",    "test",    "tools",   "upload",
        "uploads", "user",    "users",   "web",     "webadmin"};
    static const char* suffixes[] = {"",     "/",    ".php", ".html",    ".txt",
                                     ".bak", ".old", ".zip", ".tar.gz", ".inc"};
    std::set<std::string> paths;
    for (const char* p : prefixes)
        for (const char* b : bases)
            for (const char* s : suffixes) paths.insert("/" + std::string(p) + b + s);
    if (recursive)
        for (const char* b : bases)
            for (const char* s : suffixes)
                paths.insert("/wp-content/uploads/" + std::string(b) + s);
    std::vector<std::string> out(paths.begin(), paths.end());
    if (case_insensitive) {
        std::vector<std::string> extra;
        for (std::size_t i = 0; i < out.size(); i += 8) {
            std::string v = out[i];
            v[1] = static_cast<char>(std::toupper(static_cast<unsigned char>(v[1])));
            if (v != out[i]) extra.push_back(v);
        }
        out.insert(out.end(), extra.begin(), extra.end());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return out;
}

} // namespace

AttackRuntime::AttackRuntime(sim::World& w, AttackSchedule sched)
    : w_(w), sched_(std::move(sched)) {
    tunnel_ = w_.inst.attack.vpn_ip;
    const auto c = tu::to_civil(sched_.step("webshell-upload").start);
    char sub[16];
    std::snprintf(sub, sizeof sub, "%04d/%02d", c.year, c.month);
    shell_ = "/wp-content/uploads/" + std::string(sub) + "/" + w_.inst.attack.webshell;
}

rng::Stream& AttackRuntime::rng() { return w_.stream("attack/exec"); }

void AttackRuntime::record(const StepPlan& p, nlohmann::json facts) {
    w_.engine.at(p.end, [this, p, facts = std::move(facts)] {
        w_.line(*w_.attacker_host, "statemachine.log",
                logsynth::lines::attack_record(p.start, p.end, p.id, facts), p.id);
    });
}

void AttackRuntime::http(const std::string& method, const std::string& path, int status,
                         std::int64_t bytes, const std::string& agent, const std::string& tag) {
    const Host& h = *w_.intranet_server;
    w_.line(h, "apache2/access.log",
            apache_access(w_.now(), tunnel_, "-", method, path, status, bytes, "-", agent), tag);
    if (status == 404) {
        std::string doc = path.substr(0, path.find('?'));
        if (doc.size() > 1 && doc.back() == '/') doc.pop_back();
        w_.line(h, "apache2/error.log",
                apache_error(w_.now(), "core", "error", w_.stable_pid(h.hostname, "apache2"),
                             tunnel_, static_cast<int>(rng().uniform_int(32768, 60999)),
                             "AH00128: File does not exist: /var/www/html" + doc),
                tag);
    }
}

void AttackRuntime::kern(const std::string& chain, const std::string& verdict,
                         const std::string& src, const std::string& dst,
                         const std::string& proto, int dpt) {
    auto& r = rng();
    char up[32];
    std::snprintf(up, sizeof up, "%.6f",
                  73000.0 + static_cast<double>(w_.now() - w_.inst.start) / 1e6);
    std::string in = chain.rfind("vpn2", 0) == 0 ? "tun0" : "eth1";
    std::string out = chain.find("2vpn") != std::string::npos ? "tun0" : "eth1";
    std::string msg = "[" + std::string(up) + "] Shorewall:" + chain + ":" + verdict +
                      ":IN=" + in + " OUT=" + out + " SRC=" + src + " DST=" + dst +
                      " LEN=" + (proto == "ICMP" ? "84" : "60") +
                      " TOS=0x00 PREC=0x00 TTL=" + std::to_string(r.uniform_int(42, 64)) +
                      " ID=" + std::to_string(r.uniform_int(1000, 65000));
    if (proto == "ICMP") {
        msg += " PROTO=ICMP TYPE=8 CODE=0 ID=" + std::to_string(r.uniform_int(900, 22000)) +
               " SEQ=" + std::to_string(r.uniform_int(1, 64));
    } else {
        msg += " PROTO=" + proto + " SPT=" + std::to_string(r.uniform_int(33000, 61000)) +
               " DPT=" + std::to_string(dpt) + " WINDOW=1024 RES=0x00 SYN URGP=0";
    }
    w_.line(*w_.firewall, "kern.log", syslog(w_.now(), w_.firewall->hostname, "kernel", 0, msg));
}

// one command behind the webshell: the access hit plus the audit exec pair
void AttackRuntime::shell_exec(const std::string& cmd, const std::string& tag) {
    http("GET", shell_ + "?cmd=" + urlencode(cmd), 200,
         static_cast<std::int64_t>(rng().uniform_int(120, 2600)), kAttackerAgent, tag);
    const Host& h = *w_.intranet_server;
    w_.audit_exec(h, w_.stable_pid(h.hostname, "apache2"), 33, 33, cmd, tag);
}

void AttackRuntime::install() {
    const auto& crack = sched_.step("crack");
    w_.crack_start = crack.start;
    w_.crack_end = crack.end;

    install_vpn_connect(sched_.step("vpn-connect"));
    install_traceroute(sched_.step("traceroute"));
    install_network_scan(sched_.step("network-scan"));
    install_dns_scan(sched_.step("dns-scan"));
    install_service_scan(sched_.step("service-scan"));
    install_wpscan(sched_.step("wpscan"));
    install_dirb(sched_.step("dirb-scan"));
    install_webshell_upload(sched_.step("webshell-upload"));
    install_webshell_cmd(sched_.step("webshell-cmd"));
    install_db_dump(sched_.step("db-dump"));
    install_crack(crack);
    install_escalate(sched_.step("escalate"));
    install_escalated_cmd(sched_.step("escalated-cmd"));
    install_reverse_shell(sched_.step("reverse-shell"));
    install_dnsteal(sched_.step("dnsteal"));
}

void AttackRuntime::install_vpn_connect(const StepPlan& p) {
    const auto& a = w_.inst.attack;
    vpn_port_ = 21000 + static_cast<int>(rng::fnv1a64(a.attacker_addr) % 40000);
    const std::string peer = a.attacker_addr + ":" + std::to_string(vpn_port_);
    w_.engine.at(p.start, [this, peer] {
        auto& r = rng();
        char sid[24];
        std::snprintf(sid, sizeof sid, "%08x %08x", static_cast<unsigned>(r.next() & 0xffffffff),
                      static_cast<unsigned>(r.next() & 0xffffffff));
        w_.line(*w_.vpn_server, "openvpn.log",
                logsynth::lines::vpn_daemon(
                    w_.now(), "TLS: Initial packet from [AF_INET]" + peer + ", sid=" + sid),
                "vpn-connect");
    });
    w_.engine.at(p.start + (p.end - p.start) / 2, [this, peer] {
        w_.line(*w_.vpn_server, "openvpn.log",
                logsynth::lines::vpn_peer(w_.now(), w_.inst.attack.attacker_addr, vpn_port_,
                                          w_.inst.attack.vpn_user,
                                          "Peer Connection Initiated with [AF_INET]" + peer),
                "vpn-connect");
    });
    w_.engine.at(p.end, [this, peer] {
        w_.line(*w_.vpn_server, "openvpn.log",
                logsynth::lines::vpn_daemon(w_.now(),
                                            w_.inst.attack.vpn_user + "/" + peer +
                                                " MULTI_sv: pool returned IPv4=" + tunnel_ +
                                                ", IPv6=(Not enabled)"),
                "vpn-connect");
    });
    record(p, {{"tool", "openvpn"},
               {"client", peer},
               {"account", w_.inst.attack.vpn_user},
               {"tunnel_ip", tunnel_}});
}

void AttackRuntime::install_traceroute(const StepPlan& p) {
    // udp probes toward the web host; the firewall forwards and logs them
    const std::string dst = w_.intranet_server->addr;
    const int hops = 8 + static_cast<int>(rng().uniform_int(0, 4));
    const auto span = p.end - p.start;
    for (int i = 0; i < hops; ++i) {
        w_.engine.at(p.start + span * i / hops, [this, dst, i] {
            kern("vpn2int", "ACCEPT", tunnel_, dst, "UDP", 33434 + i);
        });
    }
    record(p, {{"tool", "traceroute"}, {"target", dst}, {"probes", hops}});
}

void AttackRuntime::install_network_scan(const StepPlan& p) {
    // ping sweep across the intranet range: echoes to live boxes go through,
    // the rest of the space falls into the drop policy
    std::vector<std::string> live;
    for (const auto& h : w_.inst.hosts)
        if (h.zone == "intranet" && h.hostname != w_.firewall->hostname) live.push_back(h.addr);
    const std::string prefix =
        w_.intranet_server->addr.substr(0, w_.intranet_server->addr.rfind('.') + 1);
    auto& r = rng();
    std::vector<std::pair<std::string, bool>> probes; // addr, live
    for (const auto& a : live) probes.emplace_back(a, true);
    const int dead = 15 + static_cast<int>(r.uniform_int(0, 15));
    std::set<std::string> seen(live.begin(), live.end());
    while (static_cast<int>(probes.size()) < static_cast<int>(live.size()) + dead) {
        std::string a = prefix + std::to_string(r.uniform_int(2, 254));
        if (seen.insert(a).second) probes.emplace_back(a, false);
    }
    for (std::size_t i = 0; i + 1 < probes.size(); ++i)
        std::swap(probes[i], probes[i + r.index(probes.size() - i)]);
    const auto span = p.end - p.start;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        auto pr = probes[i];
        w_.engine.at(p.start + span * static_cast<tu::UsecTime>(i) /
                         static_cast<tu::UsecTime>(probes.size()),
                     [this, pr] {
                         kern("vpn2int", pr.second ? "ACCEPT" : "DROP", tunnel_, pr.first, "ICMP",
                              0);
                     });
    }
    record(p, {{"tool", "nmap"},
               {"mode", "ping-sweep"},
               {"subnet", prefix + "0/24"},
               {"probes", probes.size()},
               {"alive", live.size()}});
}

void AttackRuntime::install_dns_scan(const StepPlan& p) {
    // reverse sweep through the forwarder; refused lookups never get answers
    auto& r = rng();
    std::vector<std::string> names;
    for (const auto& h : w_.inst.hosts)
        if (h.zone == "intranet" || h.zone == "dmz") names.push_back(reverse_name(h.addr));
    const std::string prefix =
        w_.intranet_server->addr.substr(0, w_.intranet_server->addr.rfind('.') + 1);
    const int extra = 10 + static_cast<int>(r.uniform_int(0, 15));
    for (int i = 0; i < extra; ++i)
        names.push_back(reverse_name(prefix + std::to_string(r.uniform_int(2, 254))));
    for (std::size_t i = 0; i + 1 < names.size(); ++i)
        std::swap(names[i], names[i + r.index(names.size() - i)]);
    const auto span = p.end - p.start;
    for (std::size_t i = 0; i < names.size(); ++i) {
        auto name = names[i];
        w_.engine.at(
            p.start + span * static_cast<tu::UsecTime>(i) / static_cast<tu::UsecTime>(names.size()),
            [this, name] { w_.dns_query(tunnel_, "vpn", name, "PTR", "dns-scan", true); });
    }
    record(p, {{"tool", "nmap"}, {"mode", "ptr-sweep"}, {"lookups", names.size()}});
}

void AttackRuntime::install_service_scan(const StepPlan& p) {
    static const int closed[] = {21, 23, 110, 139, 143, 465, 587, 993, 995, 2049, 3306, 5432, 8443};
    auto& r = rng();
    std::vector<const Host*> targets;
    for (const auto& name : w_.inst.attack.scan_hosts)
        if (const Host* h = w_.inst.host_by_name(name)) targets.push_back(h);
    const auto span = p.end - p.start;
    tu::UsecTime t = p.start;
    for (const Host* h : targets) {
        const auto slice = span / static_cast<tu::UsecTime>(targets.size());
        // closed ports bounce off the firewall policy
        const int drops = 2 + static_cast<int>(r.uniform_int(0, 2));
        for (int i = 0; i < drops; ++i) {
            const int dpt = closed[r.index(std::size(closed))];
            w_.engine.at(t + slice * i / (drops + 3), [this, h, dpt] {
                kern(h->zone == "dmz" ? "vpn2dmz" : "vpn2int", "DROP", tunnel_, h->addr, "TCP",
                     dpt);
            });
        }
        // the version probe opens ssh and hangs up before authenticating
        w_.engine.at(t + slice / 2, [this, h] {
            auto& rr = rng();
            w_.line(*h, "auth.log",
                    syslog(w_.now(), h->hostname, "sshd", w_.fresh_pid(h->hostname),
                           "Connection closed by " + tunnel_ + " port " +
                               std::to_string(rr.uniform_int(33000, 61000)) + " [preauth]"),
                    "service-scan");
        });
        if (w_.host_has(h->hostname, "apache2/access.log")) {
            const Host* hp = h;
            w_.engine.at(t + slice * 3 / 4, [this, hp] {
                auto& rr = rng();
                auto hit = [&](const std::string& method, const std::string& path, int status,
                               std::int64_t bytes) {
                    w_.line(*hp, "apache2/access.log",
                            apache_access(w_.now(), tunnel_, "-", method, path, status, bytes,
                                          "-", kNmapAgent),
                            "service-scan");
                    if (status == 404 && w_.host_has(hp->hostname, "apache2/error.log"))
                        w_.line(*hp, "apache2/error.log",
                                apache_error(w_.now(), "core", "error",
                                             w_.stable_pid(hp->hostname, "apache2"), tunnel_,
                                             static_cast<int>(rr.uniform_int(32768, 60999)),
                                             "AH00128: File does not exist: /var/www/html" + path),
                                "service-scan");
                };
                hit("GET", "/", 200, 11321);
                hit("GET", "/nmaplowercheck" + std::to_string(w_.now() / tu::usec_per_sec), 404,
                    miss_bytes("/nmaplowercheck"));
                hit("GET", "/favicon.ico", 404, miss_bytes("/favicon.ico"));
            });
        }
        t += slice;
    }
    std::vector<std::string> names;
    for (const Host* h : targets) names.push_back(h->hostname);
    record(p, {{"tool", "nmap"},
               {"mode", "service-probe"},
               {"top_ports", w_.inst.attack.scan_top_ports},
               {"hosts", names}});
}

void AttackRuntime::install_wpscan(const StepPlan& p) {
    struct Probe {
        const char* method;
        std::string path;
        int status;
        std::int64_t bytes;
    };
    std::vector<Probe> probes = {
        {"GET", "/", 200, 24513},
        {"GET", "/robots.txt", 404, miss_bytes("/robots.txt")},
        {"GET", "/xmlrpc.php", 405, 42},
        {"GET", "/wp-login.php", 200, 5322},
        {"GET", "/wp-json/", 200, 61210},
        {"GET", "/feed/", 200, 11002},
        {"GET", "/comments/feed/", 200, 4188},
        {"GET", "/wp-content/", 200, 744},
        {"GET", "/wp-includes/", 403, 299},
        {"GET", "/wp-content/uploads/", 200, 1381},
        {"GET", "/readme.html", 200, 7278},
        {"GET", "/wp-content/themes/twentytwenty/style.css", 200, 111082},
        {"GET", "/wp-content/plugins/akismet/readme.txt", 404,
         miss_bytes("/wp-content/plugins/akismet/readme.txt")},
        {"GET", "/wp-content/plugins/wpdiscuz/readme.txt", 200, 15231},
        {"GET", "/wp-cron.php", 200, 0},
    };
    if (w_.inst.attack.wpscan_mode == "mixed") {
        static const char* plugins[] = {
            "contact-form-7",    "yoast-seo",        "jetpack",          "woocommerce",
            "elementor",         "wordfence",        "all-in-one-seo",   "wpforms-lite",
            "really-simple-ssl", "duplicate-post",   "classic-editor",   "updraftplus",
            "wp-super-cache",    "w3-total-cache",   "mailchimp",        "redirection",
            "smush",             "litespeed-cache",  "autoptimize",      "broken-link-checker",
            "tinymce-advanced",  "google-analytics", "shortcodes-ultimate", "ninja-forms",
            "site-kit",          "health-check",     "regenerate-thumbnails", "wp-mail-smtp",
            "advanced-custom-fields", "cookie-notice", "simple-page-ordering", "loco-translate",
            "polylang",          "translatepress",   "easy-table-of-contents", "template-kit",
            "insert-headers-and-footers", "better-search-replace", "code-snippets", "disable-comments",
        };
        auto& r = rng();
        const int extra = 40 + static_cast<int>(r.uniform_int(0, 20));
        for (int i = 0; i < extra; ++i) {
            const std::string name = i < static_cast<int>(std::size(plugins))
                                         ? plugins[i]
                                         : std::string(plugins[r.index(std::size(plugins))]) +
                                               "-" + std::to_string(i);
            const std::string path = "/wp-content/plugins/" + name + "/readme.txt";
            const bool present = r.chance(0.08);
            probes.push_back({"GET", path, present ? 200 : 404,
                              present ? static_cast<std::int64_t>(r.uniform_int(900, 16000))
                                      : miss_bytes(path)});
        }
    }
    const auto span = p.end - p.start;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        Probe pr = probes[i];
        w_.engine.at(p.start + span * static_cast<tu::UsecTime>(i) /
                         static_cast<tu::UsecTime>(probes.size()),
                     [this, pr] { http(pr.method, pr.path, pr.status, pr.bytes, kWpscanAgent,
                                       "wpscan"); });
    }
    record(p, {{"tool", "wpscan"},
               {"mode", w_.inst.attack.wpscan_mode},
               {"requests", probes.size()},
               {"finding", "wpdiscuz"}});
}

void AttackRuntime::install_dirb(const StepPlan& p) {
    const auto words =
        dirb_wordlist(w_.inst.attack.dirb_recursive, w_.inst.attack.dirb_case_insensitive);
    struct Hit {
        const char* path;
        int status;
        std::int64_t bytes;
    };
    static const Hit hits[] = {
        {"/index.php", 200, 24513}, {"/license.txt", 200, 19915}, {"/readme.html", 200, 7278},
        {"/wp-admin", 301, 233},    {"/wp-login.php", 200, 5322},
    };
    const auto span = p.end - p.start;
    for (std::size_t i = 0; i < words.size(); ++i) {
        const std::string& path = words[i];
        int status = 404;
        std::int64_t bytes = miss_bytes(path);
        for (const auto& h : hits)
            if (path == h.path) {
                status = h.status;
                bytes = h.bytes;
            }
        w_.engine.at(p.start + span * static_cast<tu::UsecTime>(i) /
                         static_cast<tu::UsecTime>(words.size()),
                     [this, path, status, bytes] {
                         http("GET", path, status, bytes, kDirbAgent, "dirb-scan");
                     });
    }
    record(p, {{"tool", "dirb"},
               {"wordlist", words.size()},
               {"recursive", w_.inst.attack.dirb_recursive},
               {"case_insensitive", w_.inst.attack.dirb_case_insensitive}});
}

void AttackRuntime::install_webshell_upload(const StepPlan& p) {
    w_.engine.at(p.start, [this] {
        http("GET", "/?p=1", 200, 24805, kAttackerAgent, "webshell-upload");
    });
    w_.engine.at(p.start + (p.end - p.start) / 2, [this] {
        // wpdiscuz attachment endpoint takes the crafted image
        http("POST", "/wp-admin/admin-ajax.php", 200, 912, kAttackerAgent, "webshell-upload");
    });
    w_.engine.at(p.end, [this] {
        http("GET", shell_, 200, 64, kAttackerAgent, "webshell-upload");
    });
    record(p, {{"tool", "wpdiscuz-upload"}, {"path", shell_}});
}

void AttackRuntime::install_webshell_cmd(const StepPlan& p) {
    const auto& cmds = w_.inst.attack.webshell_cmds;
    const auto span = p.end - p.start;
    for (std::size_t i = 0; i < cmds.size(); ++i) {
        const std::string cmd = cmds[i];
        w_.engine.at(p.start + span * static_cast<tu::UsecTime>(i) /
                         static_cast<tu::UsecTime>(cmds.size()),
                     [this, cmd] { shell_exec(cmd, "webshell-cmd"); });
    }
    record(p, {{"tool", "webshell"}, {"commands", cmds}});
}

void AttackRuntime::install_db_dump(const StepPlan& p) {
    const std::string dump = "/wp-content/uploads/dump.sql";
    w_.engine.at(p.start, [this, dump] {
        shell_exec("mysqldump --all-databases --result-file=/var/www/html" + dump, "db-dump");
    });
    w_.engine.at(p.end, [this, dump] {
        http("GET", dump, 200, 4104233 + static_cast<std::int64_t>(rng().uniform_int(0, 3900000)),
             kAttackerAgent, "db-dump");
    });
    record(p, {{"tool", "mysqldump"}, {"dump", dump}});
}

void AttackRuntime::install_crack(const StepPlan& p) {
    // john runs on the compromised box against the dumped password hashes;
    // the metrics feed carries the load for the whole window
    w_.engine.at(p.start, [this] {
        shell_exec("john --wordlist=/tmp/rockyou.txt --format=phpass /tmp/hashes.txt", "crack");
    });
    w_.engine.at(p.end, [this] { shell_exec("john --show /tmp/hashes.txt", "crack"); });
    record(p, {{"tool", "john"},
               {"mode", w_.inst.attack.crack_mode},
               {"minutes", w_.inst.attack.crack_minutes},
               {"account", w_.inst.attack.crack_user}});
}

void AttackRuntime::install_escalate(const StepPlan& p) {
    const auto& a = w_.inst.attack;
    w_.engine.at(p.start, [this, a] {
        const Host& h = *w_.intranet_server;
        const int pid = w_.fresh_pid(h.hostname);
        auto auth = [&](const std::string& proc, int lpid, const std::string& msg) {
            w_.line(h, "auth.log", syslog(w_.now(), h.hostname, proc, lpid, msg), "escalate");
        };
        auth("su", pid, "Successful su for " + a.crack_user + " by www-data");
        auth("su", pid, "+ /dev/" + a.terminal + " www-data:" + a.crack_user);
        auth("su", pid, "pam_unix(su:session): session opened for user " + a.crack_user +
                            " by (uid=33)");
        auth("systemd-logind", w_.stable_pid(h.hostname, "systemd-logind"),
             "New session " + a.session_id + " of user " + a.crack_user + ".");
        auth("systemd", 0, "pam_unix(systemd-user:session): session opened for user " +
                               a.crack_user + " by (uid=0)");
    });
    record(p, {{"tool", "su"},
               {"account", a.crack_user},
               {"terminal", a.terminal},
               {"session", a.session_id}});
}

void AttackRuntime::install_escalated_cmd(const StepPlan& p) {
    const auto& a = w_.inst.attack;
    const int uid = [&] {
        for (std::size_t i = 0; i < w_.inst.users.size(); ++i)
            if (w_.inst.users[i].login == a.crack_user) return 1000 + static_cast<int>(i);
        return 1000;
    }();
    w_.engine.at(p.start, [this, a] {
        w_.line(*w_.intranet_server, "auth.log",
                sudo_syslog(w_.now(), w_.intranet_server->hostname, a.crack_user, a.terminal,
                            "root", "list"),
                "escalated-cmd");
    });
    w_.engine.at(p.end, [this, a, uid] {
        const Host& h = *w_.intranet_server;
        w_.line(h, "auth.log",
                sudo_syslog(w_.now(), h.hostname, a.crack_user, a.terminal, "root", a.root_cmd),
                "escalated-cmd");
        w_.audit_exec(h, w_.fresh_pid(h.hostname), uid, 0, a.root_cmd, "escalated-cmd");
    });
    record(p, {{"tool", "sudo"}, {"account", a.crack_user}, {"command", a.root_cmd}});
}

void AttackRuntime::install_reverse_shell(const StepPlan& p) {
    const auto& a = w_.inst.attack;
    const int uid = [&] {
        for (std::size_t i = 0; i < w_.inst.users.size(); ++i)
            if (w_.inst.users[i].login == a.crack_user) return 1000 + static_cast<int>(i);
        return 1000;
    }();
    const std::string launcher = "/bin/bash /tmp/.cache-update.sh";
    w_.engine.at(p.start, [this, a, launcher, uid] {
        kern("int2vpn", "ACCEPT", w_.intranet_server->addr, tunnel_, "TCP", a.reverse_port);
        const Host& h = *w_.intranet_server;
        w_.line(h, "auth.log",
                sudo_syslog(w_.now(), h.hostname, a.crack_user, a.terminal, "root", launcher),
                "reverse-shell");
        w_.audit_exec(h, w_.fresh_pid(h.hostname), uid, 0, launcher, "reverse-shell");
    });
    const auto span = p.end - p.start;
    const auto& cmds = a.reverse_cmds;
    for (std::size_t i = 0; i < cmds.size(); ++i) {
        const std::string cmd = cmds[i];
        w_.engine.at(p.start + span * static_cast<tu::UsecTime>(i + 1) /
                         static_cast<tu::UsecTime>(cmds.size() + 1),
                     [this, cmd, uid] {
                         const Host& h = *w_.intranet_server;
                         w_.audit_exec(h, w_.fresh_pid(h.hostname), uid, 0, cmd, "reverse-shell");
                     });
    }
    record(p, {{"tool", "reverse-shell"},
               {"port", a.reverse_port},
               {"listener", tunnel_},
               {"commands", cmds}});
}

void AttackRuntime::install_dnsteal(const StepPlan& p) {
    const auto& a = w_.inst.attack;
    struct Query {
        std::string name;
        std::string audit_file; // set on the first query of each file
    };
    std::vector<Query> queries;
    std::vector<std::string> sent;
    for (const auto& fname : a.exfil_files) {
        const model::ShareFile* sf = nullptr;
        for (const auto& f : w_.inst.files)
            if (f.name == fname) sf = &f;
        if (!sf) continue;
        sent.push_back(fname);
        auto& r = w_.stream("file/" + fname);
        std::string bytes(static_cast<std::size_t>(sf->size), '\0');
        for (auto& ch : bytes) ch = static_cast<char>(r.uniform_int(0, 255));
        if (a.exfil_compress) bytes = hashio::zlib_compress(bytes);
        const std::string b64 = text::base64_encode(bytes);
        const std::size_t block = static_cast<std::size_t>(a.exfil_block);
        const std::size_t chunks = (b64.size() + block - 1) / block;
        queries.push_back({text::base64_encode(fname) + "." + std::to_string(chunks) + "." +
                               a.exfil_domain,
                           "/srv/share/" + fname});
        std::size_t off = 0;
        while (off < b64.size()) {
            std::string name;
            for (int lbl = 0; lbl < a.exfil_subdomains && off < b64.size(); ++lbl) {
                const std::size_t n = std::min(block, b64.size() - off);
                name += b64.substr(off, n) + ".";
                off += n;
            }
            queries.push_back({name + a.exfil_domain, ""});
        }
    }
    const auto span = p.end - p.start;
    auto& r = rng();
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const Query q = queries[i];
        const auto t = p.start + static_cast<tu::UsecTime>(
                                     (static_cast<double>(i) + 0.3 * r.unit()) *
                                     static_cast<double>(span) /
                                     static_cast<double>(queries.size()));
        w_.engine.at(t, [this, q] {
            if (!q.audit_file.empty()) {
                // the implant wakes up for the next file; the share host's
                // audit rules catch the exec
                const Host& h = *w_.file_share;
                const int pid = w_.fresh_pid(h.hostname);
                w_.audit_group(
                    h,
                    {{"SYSCALL",
                      {{"arch", "c000003e"},
                       {"syscall", "59"},
                       {"success", "yes"},
                       {"exit", "0"},
                       {"ppid", "1"},
                       {"pid", std::to_string(pid)},
                       {"auid", "4294967295"},
                       {"uid", "0"},
                       {"gid", "0"},
                       {"euid", "0"},
                       {"comm", "dnsteal.py"},
                       {"exe", "/tmp/.dnsteal/dnsteal.py"},
                       {"key", "cmds"}}},
                     {"EXECVE",
                      {{"argc", "2"},
                       {"a0", "/tmp/.dnsteal/dnsteal.py"},
                       {"a1", q.audit_file}}}},
                    "dnsteal");
            }
            w_.dns_query(w_.file_share->addr, w_.file_share->zone, q.name, "A", "dnsteal",
                         false, w_.inst.attack.attacker_addr);
        });
    }
    record(p, {{"tool", "dnsteal"},
               {"domain", a.exfil_domain},
               {"block", a.exfil_block},
               {"subdomains", a.exfil_subdomains},
               {"compress", a.exfil_compress},
               {"queries", queries.size()},
               {"files", sent}});
}

} // namespace logbed::attack
