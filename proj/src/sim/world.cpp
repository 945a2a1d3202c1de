#include "logbed/sim/world.hpp"

#include "logbed/core/errors.hpp"
#include "logbed/core/text.hpp"
#include "logbed/logsynth/lines.hpp"

namespace logbed::sim {

namespace tu = logbed::timeutil;
using logsynth::lines::queue_id;

namespace {

const model::Host* need_role(const model::ScenarioInstance& inst, const char* role) {
    const auto* h = inst.host_by_role(role);
    if (!h) throw ValidationError(std::string("instance lacks a ") + role + " host");
    return h;
}

} // namespace

World::World(const model::ScenarioInstance& instance, logsynth::SinkSet& out)
    : inst(instance), sinks(out) {
    firewall = need_role(inst, "firewall");
    dns_server = need_role(inst, "dns-server");
    vpn_server = need_role(inst, "vpn-server");
    intranet_server = need_role(inst, "intranet-server");
    file_share = need_role(inst, "file-share");
    cloud_share = need_role(inst, "cloud-share");
    web_server = need_role(inst, "web-server");
    attacker_host = need_role(inst, "attacker");
    for (const auto* m : inst.hosts_by_role("mail-server"))
        if (m->zone == "dmz") org_mail = m;
    if (!org_mail) throw ValidationError("instance lacks the dmz mail provider");

    for (const auto& h : inst.hosts) {
        if (!h.fqdn.empty()) fqdn_addr_[h.fqdn] = h.addr;
        if (h.zone == "intranet" || h.zone == "dmz")
            if (h.role != "internal") org_servers.push_back(&h);
        for (const auto& f : logsynth::files_for_host(h))
            layout_.insert(h.hostname + "\n" + f.rel);
    }
    engine.at(inst.start, [] {});
    engine.run_until(inst.start);
}

rng::Stream& World::stream(const std::string& label) {
    auto it = streams_.find(label);
    if (it == streams_.end())
        it = streams_.emplace(label, rng::derive(inst.seed, label)).first;
    return it->second;
}

int World::fresh_pid(const std::string& hostname) {
    auto it = fresh_pids_.find(hostname);
    if (it == fresh_pids_.end()) {
        const int base = 1200 + static_cast<int>(rng::fnv1a64(hostname) % 2800);
        it = fresh_pids_.emplace(hostname, base).first;
    }
    it->second += 1 + static_cast<int>((static_cast<std::uint64_t>(it->second) *
                                        2654435761ULL >> 20) % 7);
    if (it->second > 60000) it->second = 1200; // pid space wrapped
    return it->second;
}

int World::stable_pid(const std::string& hostname, const std::string& proc) {
    const std::string key = hostname + "\n" + proc;
    auto it = stable_pids_.find(key);
    if (it == stable_pids_.end())
        it = stable_pids_.emplace(key, 300 + static_cast<int>(rng::fnv1a64(key) % 900)).first;
    return it->second;
}

std::int64_t World::next_audit_serial(const std::string& hostname) {
    auto it = audit_serials_.find(hostname);
    if (it == audit_serials_.end()) {
        const auto base = 120 + static_cast<std::int64_t>(rng::fnv1a64(hostname) % 400);
        it = audit_serials_.emplace(hostname, base).first;
    }
    return ++it->second;
}

std::string World::next_queue_id(const std::string& hostname) {
    auto& n = queue_counts_[hostname];
    return queue_id(rng::fnv1a64(hostname) % 1000 + n++);
}

bool World::host_has(const std::string& hostname, const std::string& rel) const {
    return layout_.count(hostname + "\n" + rel) > 0;
}

void World::line(const model::Host& host, const std::string& rel, const std::string& text,
                 const std::string& tag) {
    sinks.write(host.hostname, rel, now(), text, tag);
}

std::string World::resolve(const std::string& name) const {
    const auto it = fqdn_addr_.find(name);
    if (it != fqdn_addr_.end()) return it->second;
    // everything else lives out on the documentation nets
    const auto h = rng::fnv1a64(name);
    const char* net = (h & 0x100) ? "203.0.113." : "198.51.100.";
    return net + std::to_string(1 + h % 254);
}

bool World::org_name(const std::string& name) const {
    return name == inst.org_domain || text::ends_with(name, "." + inst.org_domain);
}

void World::dns_query(const std::string& client_addr, const std::string& client_zone,
                      const std::string& name, const std::string& qtype, const std::string& tag,
                      bool query_only, const std::string& reply_ip) {
    const std::string answer = reply_ip.empty() ? resolve(name) : reply_ip;
    // TEST-NET-1 stands in for the resolver's own upstream
    static const std::string upstream = "192.0.2.53";
    const int up_pid = stable_pid(dns_server->hostname, "dnsmasq");

    if (client_zone == "internet") {
        // never touches the org edge; only the resolver's own log sees it
        line(*dns_server, "dnsmasq.log",
             logsynth::lines::dns_query(now(), dns_server->hostname, up_pid, qtype, name,
                                        client_addr),
             tag);
        if (query_only) return;
        if (!org_name(name))
            line(*dns_server, "dnsmasq.log",
                 logsynth::lines::syslog(now(), dns_server->hostname, "dnsmasq", up_pid,
                                         "forwarded " + name + " to " + upstream),
                 tag);
        line(*dns_server, "dnsmasq.log",
             logsynth::lines::dns_reply(now(), dns_server->hostname, up_pid, name, answer), tag);
        return;
    }

    // the firewall forwarder fields queries from every org-side network
    const int fw_pid = stable_pid(firewall->hostname, "dnsmasq");
    line(*firewall, "dnsmasq.log",
         logsynth::lines::dns_query(now(), firewall->hostname, fw_pid, qtype, name, client_addr),
         tag);
    if (query_only) return;
    if (org_name(name)) {
        line(*firewall, "dnsmasq.log",
             logsynth::lines::dns_reply(now(), firewall->hostname, fw_pid, name, answer), tag);
        return;
    }
    line(*firewall, "dnsmasq.log",
         logsynth::lines::syslog(now(), firewall->hostname, "dnsmasq", fw_pid,
                                 "forwarded " + name + " to " + dns_server->addr),
         tag);
    line(*dns_server, "dnsmasq.log",
         logsynth::lines::dns_query(now(), dns_server->hostname, up_pid, qtype, name,
                                    firewall->addr),
         tag);
    line(*dns_server, "dnsmasq.log",
         logsynth::lines::syslog(now(), dns_server->hostname, "dnsmasq", up_pid,
                                 "forwarded " + name + " to " + upstream),
         tag);
    line(*dns_server, "dnsmasq.log",
         logsynth::lines::dns_reply(now(), dns_server->hostname, up_pid, name, answer), tag);
    line(*firewall, "dnsmasq.log",
         logsynth::lines::dns_reply(now(), firewall->hostname, fw_pid, name, answer), tag);
}

void World::dns_lookup(const std::string& client_addr, const std::string& client_zone,
                       const std::string& name, const std::string& tag) {
    const std::string key = client_addr + "\n" + name;
    const auto it = dns_cache_.find(key);
    if (it != dns_cache_.end() && it->second > now()) return;
    dns_cache_[key] = now() + inst.behavior.dns_cache_min * tu::usec_per_min;
    dns_query(client_addr, client_zone, name, "A", tag);
}

void World::audit_event(const model::Host& host, const std::string& type,
                        std::vector<logsynth::Field> kvs, const std::string& tag) {
    line(host, "audit/audit.log",
         logsynth::lines::audit(now(), type, next_audit_serial(host.hostname), kvs), tag);
}

void World::audit_group(const model::Host& host,
                        const std::vector<std::pair<std::string, std::vector<logsynth::Field>>>& recs,
                        const std::string& tag) {
    const auto serial = next_audit_serial(host.hostname);
    for (const auto& [type, kvs] : recs)
        line(host, "audit/audit.log", logsynth::lines::audit(now(), type, serial, kvs), tag);
}

int World::audit_exec(const model::Host& host, int ppid, int uid, int euid,
                      const std::string& command, const std::string& tag) {
    const auto argv = text::split(command, ' ');
    std::string exe = argv[0];
    if (exe.empty() || exe[0] != '/') exe = "/usr/bin/" + exe;
    std::string comm = exe.substr(exe.rfind('/') + 1);
    if (comm.size() > 15) comm.resize(15); // kernel truncates comm

    const int pid = fresh_pid(host.hostname);
    const auto serial = next_audit_serial(host.hostname);
    std::vector<logsynth::Field> sys = {
        {"arch", "c000003e"}, {"syscall", "59"},
        {"success", "yes"},   {"exit", "0"},
        {"ppid", std::to_string(ppid)}, {"pid", std::to_string(pid)},
        {"auid", std::to_string(uid)},  {"uid", std::to_string(uid)},
        {"gid", std::to_string(uid)},   {"euid", std::to_string(euid)},
        {"comm", comm},       {"exe", exe},
        {"key", "cmds"}};
    line(host, "audit/audit.log", logsynth::lines::audit(now(), "SYSCALL", serial, sys), tag);

    std::vector<logsynth::Field> ex = {{"argc", std::to_string(argv.size())}};
    for (std::size_t i = 0; i < argv.size(); ++i)
        ex.push_back({"a" + std::to_string(i), argv[i]});
    line(host, "audit/audit.log", logsynth::lines::audit(now(), "EXECVE", serial, ex), tag);
    return pid;
}

std::string World::mail_domain(const model::Host& provider) const {
    // provider fqdns all start with the "mail." label
    return provider.fqdn.substr(provider.fqdn.find('.') + 1);
}

std::string World::mail_addr(const model::UserProfile& u) const {
    const auto* p = inst.host_by_name(u.mail_host);
    if (!p) throw ValidationError("user " + u.login + " references unknown provider " + u.mail_host);
    return u.login + "@" + mail_domain(*p);
}

void World::deliver_mail(const model::UserProfile& from, const model::UserProfile& to,
                         std::int64_t size, const std::string& tag) {
    const auto* sender = inst.host_by_name(from.mail_host);
    const auto* recipient = inst.host_by_name(to.mail_host);
    if (!sender || !recipient) throw ValidationError("mail between unknown providers");

    const std::string qid = next_queue_id(sender->hostname);
    const std::string mid = qid + "@" + sender->fqdn;
    const std::string from_addr = mail_addr(from);
    const std::string to_addr = mail_addr(to);

    // webmail submits through the loopback listener
    line(*sender, "exim4/mainlog",
         logsynth::lines::mail_arrival(now(), qid, from_addr, "localhost", "127.0.0.1", size, mid),
         tag);
    if (sender == recipient) {
        line(*sender, "exim4/mainlog",
             logsynth::lines::mail_delivery(now(), qid, to_addr, "local_user", "mail_spool",
                                            sender->fqdn, "127.0.0.1", size),
             tag);
        line(*sender, "exim4/mainlog", logsynth::lines::mail_completed(now(), qid), tag);
        return;
    }

    // outbound hop; resolving the peer walks the usual resolver chain
    dns_lookup(sender->addr, sender->zone, recipient->fqdn, tag);
    line(*sender, "exim4/mainlog",
         logsynth::lines::mail_delivery(now(), qid, to_addr, "dnslookup", "remote_smtp",
                                        recipient->fqdn, recipient->addr, size),
         tag);
    line(*sender, "exim4/mainlog", logsynth::lines::mail_completed(now(), qid), tag);

    const std::string qid2 = next_queue_id(recipient->hostname);
    line(*recipient, "exim4/mainlog",
         logsynth::lines::mail_arrival(now(), qid2, from_addr, sender->fqdn, sender->addr, size,
                                       mid),
         tag);
    line(*recipient, "exim4/mainlog",
         logsynth::lines::mail_delivery(now(), qid2, to_addr, "local_user", "mail_spool",
                                        recipient->fqdn, "127.0.0.1", size),
         tag);
    line(*recipient, "exim4/mainlog", logsynth::lines::mail_completed(now(), qid2), tag);
}

} // namespace logbed::sim
