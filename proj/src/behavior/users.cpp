#include <algorithm>
#include <cstdio>

#include "logbed/behavior/runtime.hpp"
#include "logbed/core/errors.hpp"
#include "logbed/core/text.hpp"
#include "logbed/logsynth/lines.hpp"

namespace logbed::behavior {

namespace tu = logbed::timeutil;
namespace lines = logbed::logsynth::lines;
using sim::weighted_index;

namespace {

const char* kAgentFirefox =
    "Mozilla/5.0 (X11; Ubuntu; Linux x86_64; rv:68.0) Gecko/20100101 Firefox/68.0";
const char* kAgentChromium =
    "Mozilla/5.0 (X11; Linux x86_64) AppleWebKit/537.36 (KHTML, like Gecko) "
    "Chrome/79.0.3945.79 Safari/537.36";

const std::vector<std::string>& admin_commands() {
    static const std::vector<std::string> cmds = {
        "ls -la /var/www",    "df -h",
        "free -m",            "uptime",
        "tail -n 50 /var/log/syslog", "ps aux",
        "du -sh /srv",        "ip a",
        "cat /etc/hosts",     "systemctl status apache2"};
    return cmds;
}

std::string hex32(rng::Stream& r) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(r.next() & 0xffffffffu));
    return buf;
}

} // namespace

struct UserRuntime::Session {
    const model::UserProfile* u = nullptr;
    const model::Host* host = nullptr; // the machine on their desk or lap
    std::size_t index = 0;
    rng::Stream rng;

    int epoch = 0; // bumps on day boundaries so stale events die
    bool active = false;
    tu::UsecTime deadline = 0;
    int budget = 0;

    const MachineDef* mach = nullptr; // null = at the desk hub
    std::string state;

    int vpn_port = 0;

    const model::Host* ssh_target = nullptr;
    int ssh_pid = 0;
    int ssh_port = 0;
    bool ssh_open = false;
    int smb_pid = 0;

    std::string site;      // current browsing tab
    int page = 0;
    std::string last_path; // referer for the next intranet hit
    int post_id = 0;

    std::string client_ip() const {
        if (u->kind == "remote") return u->vpn_ip;
        return host->addr;
    }
    std::string client_zone() const {
        if (u->kind == "remote") return "vpn";
        return host->zone; // intranet pc or internet machine
    }
    const char* agent() const { return u->browser == "chromium" ? kAgentChromium : kAgentFirefox; }
    double idle_sample(Idle cls, rng::Stream& r) const {
        const auto& [lo, hi] = u->idle[static_cast<std::size_t>(cls)];
        return r.uniform_real(lo, hi);
    }
};

UserRuntime::UserRuntime(sim::World& w) : w_(w) {}
UserRuntime::~UserRuntime() = default;

void UserRuntime::install() {
    const auto& inst = w_.inst;
    for (std::size_t i = 0; i < inst.users.size(); ++i) {
        auto s = std::make_unique<Session>();
        s->u = &inst.users[i];
        s->host = inst.host_by_name(s->u->host);
        if (!s->host) throw ValidationError("user " + s->u->login + " has no machine");
        s->index = i;
        s->rng = rng::derive(inst.seed, "user/" + std::to_string(i) + "/walk");
        sims_.push_back(std::move(s));
    }
    for (std::size_t i = 0; i < sims_.size(); ++i) {
        Session& s = *sims_[i];
        for (int d = 0; d < inst.days(); ++d) {
            const tu::UsecTime day0 = inst.start + d * tu::usec_per_day;
            const bool weekend = tu::weekday(day0) == 0 || tu::weekday(day0) == 6;
            const auto jitter = s.rng.uniform_int(0, s.u->wake_jitter_min * 60);
            if (weekend && !s.rng.chance(inst.behavior.weekend_activity)) continue;
            const tu::UsecTime wake =
                day0 + s.u->work_start_min * tu::usec_per_min + jitter * tu::usec_per_sec;
            w_.engine.at(wake, [this, i, d, weekend] { begin_day(i, d, weekend); });
        }
    }
}

void UserRuntime::begin_day(std::size_t i, int day, bool weekend) {
    Session& s = *sims_[i];
    const auto& inst = w_.inst;
    s.epoch++;
    s.active = true;
    s.mach = nullptr;
    s.state.clear();
    s.ssh_open = false;
    s.deadline = inst.start + day * tu::usec_per_day + s.u->work_end_min * tu::usec_per_min -
                 2 * tu::usec_per_min;
    double scale = s.rng.uniform_real(0.85, 1.15);
    if (weekend) scale *= inst.behavior.weekend_activity;
    s.budget = std::max(1, static_cast<int>(s.u->daily_actions * scale));

    w_.line(*s.host, "statemachine.log",
            lines::trace_step(w_.now(), "day", "sleep", "desk", "wake"));
    if (s.u->kind == "remote") vpn_up(s);

    const int epoch = s.epoch;
    w_.engine.at(s.deadline, [this, i, epoch] { end_day(i, epoch); });
    next_move(i);
}

void UserRuntime::end_day(std::size_t i, int epoch) {
    Session& s = *sims_[i];
    if (s.epoch != epoch || !s.active) return;
    if (s.ssh_open) ssh_teardown(s);
    if (s.u->kind == "remote") vpn_down(s);
    w_.line(*s.host, "statemachine.log",
            lines::trace_step(w_.now(), "day", "desk", "sleep", "sleep"));
    s.active = false;
    s.mach = nullptr;
    s.epoch++; // kills pending moves scheduled before the teardown
}

void UserRuntime::next_move(std::size_t i) {
    Session& s = *sims_[i];
    if (!s.active || s.budget <= 0) return;

    // choose what happens, then dwell before it fires
    const int epoch = s.epoch;
    double dwell;
    std::function<void()> fire;

    if (!s.mach) {
        // at the desk: pick the next activity by the hub weights
        std::vector<const MachineDef*> avail;
        std::vector<double> weights;
        for (const auto& m : machine_defs()) {
            const std::string name = m.name;
            if (name == "cloud" && s.u->cloud_role == "none") continue;
            if (name == "wordpress" && s.u->wp_role == "none") continue;
            if (name == "ssh" && !s.u->ssh_admin) continue;
            if (name == "fileshare" && s.u->share_role == "none") continue;
            avail.push_back(&m);
            weights.push_back(s.u->weights.at("desk->" + name));
        }
        const MachineDef* pick = avail[weighted_index(s.rng, weights)];
        dwell = s.idle_sample(Idle::Small, s.rng);
        fire = [this, i, pick] { enter_machine(i, pick); };
    } else {
        std::vector<const EdgeDef*> out;
        for (const auto& e : s.mach->edges)
            if (s.state == e.from) out.push_back(&e);
        if (out.empty()) throw RuntimeFailure(std::string("dead state ") + s.mach->name + ":" +
                                              s.state);
        // login-style states fail at the profile rate, not the edge weight
        const EdgeDef* fail = nullptr;
        for (const auto* e : out) {
            const std::string to = e->to;
            if (to.find("failed") != std::string::npos || to == "denied") fail = e;
        }
        const EdgeDef* pick = nullptr;
        if (fail && s.rng.chance(s.u->failed_login_p)) {
            pick = fail;
        } else {
            std::vector<const EdgeDef*> normal;
            std::vector<double> weights;
            for (const auto* e : out) {
                if (e == fail) continue;
                normal.push_back(e);
                weights.push_back(
                    s.u->weights.at(std::string(s.mach->name) + "." + e->from + "->" + e->to));
            }
            pick = normal[weighted_index(s.rng, weights)];
        }
        dwell = s.idle_sample(pick->idle, s.rng);
        fire = [this, i, pick] { apply_edge(i, *pick); };
    }

    // pacing: stretch the remaining budget over the remaining workday
    if (s.deadline > w_.now()) {
        const double gap =
            static_cast<double>(s.deadline - w_.now()) / 1e6 / (s.budget + 1);
        if (s.rng.chance(0.7)) dwell += s.rng.uniform_real(0.2 * gap, 0.9 * gap);
    }
    w_.engine.after(static_cast<std::int64_t>(dwell * 1e6), [this, i, epoch, fire] {
        Session& ss = *sims_[i];
        if (ss.epoch != epoch || !ss.active) return;
        fire();
    });
}

void UserRuntime::enter_machine(std::size_t i, const MachineDef* m) {
    Session& s = *sims_[i];
    w_.line(*s.host, "statemachine.log",
            lines::trace_step(w_.now(), "desk", "desk", m->name, "enter"));
    s.mach = m;
    s.state = m->entry;
    if (std::string(m->name) == "ssh") {
        // the target is picked when the terminal opens
        const model::Host* pool[] = {w_.file_share, w_.cloud_share, w_.web_server};
        s.ssh_target = pool[s.rng.index(3)];
        s.ssh_port = static_cast<int>(s.rng.uniform_int(40000, 64900));
        s.ssh_pid = 0;
        w_.dns_lookup(s.client_ip(), s.client_zone(), s.ssh_target->fqdn, "normal");
    }
    if (std::string(m->name) == "browsing") {
        s.site.clear();
        s.page = 0;
    }
    s.last_path = "-";
    next_move(i);
}

void UserRuntime::apply_edge(std::size_t i, const EdgeDef& e) {
    Session& s = *sims_[i];
    w_.line(*s.host, "statemachine.log",
            lines::trace_step(w_.now(), s.mach->name, e.from, e.to, e.action));
    s.state = e.to;
    if (e.action[0] != '\0') {
        emit_action(i, e.action);
        s.budget--;
    }
    if (s.state == s.mach->exit) {
        s.mach = nullptr;
        s.state.clear();
    }
    next_move(i);
}

void UserRuntime::emit_action(std::size_t i, const std::string& action) {
    Session& s = *sims_[i];
    const std::string name = s.mach->name;
    if (name == "cloud") act_cloud(s, action);
    else if (name == "webmail") act_webmail(s, action);
    else if (name == "wordpress") act_wordpress(s, action);
    else if (name == "browsing") act_browsing(s, action);
    else if (name == "ssh") act_ssh(s, action);
    else if (name == "fileshare") act_fileshare(s, action);
}

// ---- vpn sessions ----------------------------------------------------------

void UserRuntime::vpn_up(Session& s) {
    s.vpn_port = static_cast<int>(s.rng.uniform_int(20000, 62000));
    const std::string peer = s.host->addr + ":" + std::to_string(s.vpn_port);
    w_.line(*w_.vpn_server, "openvpn.log",
            lines::vpn_daemon(w_.now(), "TLS: Initial packet from [AF_INET]" + peer + ", sid=" +
                                            hex32(s.rng) + " " + hex32(s.rng)));
    w_.line(*w_.vpn_server, "openvpn.log",
            lines::vpn_peer(w_.now(), s.host->addr, s.vpn_port, s.u->login,
                            "Peer Connection Initiated with [AF_INET]" + peer));
    w_.line(*w_.vpn_server, "openvpn.log",
            lines::vpn_daemon(w_.now(), s.u->login + "/" + peer + " MULTI_sv: pool returned IPv4=" +
                                            s.u->vpn_ip + ", IPv6=(Not enabled)"));
}

void UserRuntime::vpn_down(Session& s) {
    const std::string peer = s.host->addr + ":" + std::to_string(s.vpn_port);
    w_.line(*w_.vpn_server, "openvpn.log",
            lines::vpn_daemon(w_.now(), s.u->login + "/" + peer +
                                            " SIGTERM[soft,remote-exit] received, "
                                            "client-instance exiting"));
}

// ---- ssh -------------------------------------------------------------------

void UserRuntime::ssh_teardown(Session& s) {
    const model::Host& t = *s.ssh_target;
    w_.line(t, "auth.log",
            lines::syslog(w_.now(), t.hostname, "sshd", s.ssh_pid,
                          "pam_unix(sshd:session): session closed for user " + s.u->login));
    w_.line(t, "auth.log",
            lines::syslog(w_.now(), t.hostname, "sshd", s.ssh_pid,
                          "Disconnected from user " + s.u->login + " " + s.client_ip() +
                              " port " + std::to_string(s.ssh_port)));
    s.ssh_open = false;
}

void UserRuntime::act_ssh(Session& s, const std::string& action) {
    const model::Host& t = *s.ssh_target;
    if (action == "auth_ok") {
        s.ssh_pid = w_.fresh_pid(t.hostname);
        s.ssh_open = true;
        w_.line(t, "auth.log",
                lines::syslog(w_.now(), t.hostname, "sshd", s.ssh_pid,
                              "Accepted password for " + s.u->login + " from " + s.client_ip() +
                                  " port " + std::to_string(s.ssh_port) + " ssh2"));
        w_.line(t, "auth.log",
                lines::syslog(w_.now(), t.hostname, "sshd", s.ssh_pid,
                              "pam_unix(sshd:session): session opened for user " + s.u->login +
                                  " by (uid=0)"));
    } else if (action == "auth_failed") {
        w_.line(t, "auth.log",
                lines::syslog(w_.now(), t.hostname, "sshd", w_.fresh_pid(t.hostname),
                              "Failed password for " + s.u->login + " from " + s.client_ip() +
                                  " port " + std::to_string(s.ssh_port) + " ssh2"));
    } else if (action == "run_command") {
        const auto& cmds = admin_commands();
        const int uid = 1000 + static_cast<int>(s.index);
        w_.audit_exec(t, s.ssh_pid, uid, uid, cmds[s.rng.index(cmds.size())], "normal");
    } else if (action == "disconnect") {
        ssh_teardown(s);
    }
}

// ---- file share ------------------------------------------------------------

void UserRuntime::act_fileshare(Session& s, const std::string& action) {
    const model::Host& t = *w_.file_share;
    const int uid = 1000 + static_cast<int>(s.index);
    auto smb_access = [&](const std::string& path) {
        std::vector<logsynth::Field> sys = {
            {"arch", "c000003e"}, {"syscall", "2"},
            {"success", "yes"},   {"exit", "3"},
            {"ppid", std::to_string(w_.stable_pid(t.hostname, "smbd"))},
            {"pid", std::to_string(s.smb_pid)},
            {"auid", std::to_string(uid)}, {"uid", std::to_string(uid)},
            {"gid", std::to_string(uid)},  {"euid", std::to_string(uid)},
            {"comm", "smbd"},     {"exe", "/usr/sbin/smbd"},
            {"key", "share"}};
        std::vector<logsynth::Field> pathrec = {
            {"item", "0"},
            {"name", path},
            {"inode", std::to_string(100000 + rng::fnv1a64(path) % 900000)},
            {"dev", "08:02"},
            {"mode", "0100644"},
            {"ouid", std::to_string(uid)},
            {"ogid", "1000"}};
        w_.audit_group(t, {{"SYSCALL", sys}, {"PATH", pathrec}}, "normal");
    };
    if (action == "mount_share") {
        s.smb_pid = w_.fresh_pid(t.hostname);
        w_.dns_lookup(s.client_ip(), s.client_zone(), t.fqdn, "normal");
        smb_access("/srv/share");
    } else if (action == "read_file" || action == "write_file") {
        const auto& f = w_.inst.files[s.rng.index(w_.inst.files.size())];
        smb_access("/srv/share/" + f.name);
    }
    // unmount leaves no trail beyond the trace
}

// ---- cloud -----------------------------------------------------------------

void UserRuntime::act_cloud(Session& s, const std::string& action) {
    // the cloud box is not in the collected set; only the resolver sees it
    if (action == "login_ok" || action == "login_failed")
        w_.dns_lookup(s.client_ip(), s.client_zone(), w_.cloud_share->fqdn, "normal");
}

// ---- webmail ---------------------------------------------------------------

void UserRuntime::act_webmail(Session& s, const std::string& action) {
    const auto* provider = w_.inst.host_by_name(s.u->mail_host);
    const model::Host& p = *provider;
    const std::string who = s.u->login + " [" + s.client_ip() + "]";
    if (action == "login_ok") {
        w_.dns_lookup(s.client_ip(), s.client_zone(), p.fqdn, "normal");
        w_.line(p, "horde/access.log",
                lines::horde(w_.now(), "INFO", "imp", "Login success for " + who + " to {imp}"));
        w_.line(p, "mail.info",
                lines::syslog(w_.now(), p.hostname, "dovecot", w_.stable_pid(p.hostname, "dovecot"),
                              "imap-login: Login: user=<" + s.u->login +
                                  ">, method=PLAIN, rip=" + s.client_ip() + ", lip=" + p.addr +
                                  ", mpid=" + std::to_string(w_.fresh_pid(p.hostname)) + ", TLS"));
    } else if (action == "login_failed") {
        w_.line(p, "horde/error.log",
                lines::horde(w_.now(), "ERR", "imp", "FAILED LOGIN for " + who + " to {imp}"));
    } else if (action == "read_mail") {
        w_.line(p, "horde/access.log",
                lines::horde(w_.now(), "INFO", "imp",
                             "Message viewed (mailbox INBOX, uid " +
                                 std::to_string(s.rng.uniform_int(100, 9000)) + ") by " + who));
    } else if (action == "send_mail") {
        const auto& contacts = s.u->contacts;
        if (!contacts.empty()) {
            const auto* to = w_.inst.user(contacts[s.rng.index(contacts.size())]);
            if (to) {
                const auto size = s.rng.uniform_int(1200, 42000);
                w_.deliver_mail(*s.u, *to, size, "normal");
                w_.line(p, "horde/access.log",
                        lines::horde(w_.now(), "INFO", "imp",
                                     "Message sent to " + w_.mail_addr(*to) + " from " + who));
            }
        }
    } else if (action == "logout") {
        w_.line(p, "horde/access.log",
                lines::horde(w_.now(), "INFO", "horde", "User " + who + " logged out of Horde"));
    }
    // open_compose, open_reply and refresh_inbox stay client-side
}

// ---- wordpress -------------------------------------------------------------

void UserRuntime::wp_hit(Session& s, const std::string& method, const std::string& path,
                         int status, const std::string& tag) {
    const auto bytes = s.rng.uniform_int(600, 28000);
    const std::string referer =
        s.last_path == "-" ? "-" : "http://" + w_.intranet_server->fqdn + s.last_path;
    w_.line(*w_.intranet_server, "apache2/access.log",
            lines::apache_access(w_.now(), s.client_ip(), "-", method, path, status, bytes,
                                 referer, s.agent()),
            tag);
    s.last_path = path;
    // a sloppy plugin now and then
    if (s.rng.chance(0.02))
        w_.line(*w_.intranet_server, "apache2/error.log",
                lines::apache_error(
                    w_.now(), "php7.2", "warn", w_.stable_pid(w_.intranet_server->hostname, "apache2"),
                    s.client_ip(), static_cast<int>(s.rng.uniform_int(32768, 60999)),
                    "PHP Notice:  Undefined index: action in "
                    "/var/www/html/wp-content/plugins/wpdiscuz/forms/wpdFormAttr/Form.php on "
                    "line 96"),
                tag);
}

void UserRuntime::act_wordpress(Session& s, const std::string& action) {
    if (action == "login_ok") {
        w_.dns_lookup(s.client_ip(), s.client_zone(), w_.intranet_server->fqdn, "normal");
        wp_hit(s, "POST", "/wp-login.php", 302);
        wp_hit(s, "GET", "/wp-admin/", 200);
    } else if (action == "login_failed") {
        wp_hit(s, "POST", "/wp-login.php", 200);
    } else if (action == "list_posts") {
        wp_hit(s, "GET", "/wp-admin/edit.php", 200);
    } else if (action == "review_comments") {
        wp_hit(s, "GET", "/wp-admin/edit-comments.php", 200);
    } else if (action == "browse_media") {
        wp_hit(s, "GET", "/wp-admin/upload.php", 200);
    } else if (action == "edit_post") {
        s.post_id = static_cast<int>(s.rng.uniform_int(100, 4000));
        wp_hit(s, "GET", "/wp-admin/post.php?post=" + std::to_string(s.post_id) + "&action=edit",
               200);
    } else if (action == "save_draft") {
        wp_hit(s, "POST", "/wp-admin/post.php", 302);
    } else if (action == "publish_post") {
        wp_hit(s, "POST", "/wp-admin/post.php", 302);
        wp_hit(s, "GET", "/?p=" + std::to_string(s.post_id), 200);
    } else if (action == "moderate_comment") {
        wp_hit(s, "POST", "/wp-admin/comment.php", 302);
    } else if (action == "upload_media") {
        wp_hit(s, "POST", "/wp-admin/async-upload.php", 200);
    } else if (action == "logout") {
        wp_hit(s, "GET", "/wp-login.php?action=logout", 302);
    }
}

// ---- browsing --------------------------------------------------------------

void UserRuntime::act_browsing(Session& s, const std::string& action) {
    const std::string& intranet_fqdn = w_.intranet_server->fqdn;
    if (action == "open_site" || action == "new_site") {
        s.site = s.u->sites[s.rng.index(s.u->sites.size())];
        s.page = 1;
        s.last_path = "-";
        w_.dns_lookup(s.client_ip(), s.client_zone(), s.site, "normal");
        if (s.site == intranet_fqdn) wp_hit(s, "GET", "/", 200);
    } else if (action == "follow_link") {
        s.page++;
        if (s.site == intranet_fqdn)
            wp_hit(s, "GET", "/?p=" + std::to_string(s.rng.uniform_int(1, 300)), 200);
        // pages elsewhere on the internet leave no collected trail
    }
}

} // namespace logbed::behavior
