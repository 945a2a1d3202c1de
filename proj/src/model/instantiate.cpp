#include <algorithm>
#include <set>

#include "logbed/attack/vocab.hpp"
#include "logbed/behavior/topology.hpp"
#include "logbed/core/errors.hpp"
#include "logbed/core/text.hpp"
#include "logbed/model/model.hpp"

namespace logbed::model {

using nlohmann::json;
namespace tu = logbed::timeutil;

namespace {

struct AddrAlloc {
    std::set<std::string>* used;
    rng::Stream* r;

    std::string take(const Zone& z) {
        for (int attempt = 0; attempt < 4096; ++attempt) {
            std::string addr;
            if (z.cls == "a") {
                addr = "10." + std::to_string(r->uniform_int(0, 255)) + "." +
                       std::to_string(r->uniform_int(0, 255)) + "." +
                       std::to_string(r->uniform_int(2, 254));
            } else {
                // cidr is dotted with a /NN suffix; reuse its leading octets
                const auto slash = z.cidr.find('/');
                const auto base = text::split(z.cidr.substr(0, slash), '.');
                if (z.cls == "b")
                    addr = base[0] + "." + base[1] + "." +
                           std::to_string(r->uniform_int(0, 255)) + "." +
                           std::to_string(r->uniform_int(2, 254));
                else
                    addr = base[0] + "." + base[1] + "." + base[2] + "." +
                           std::to_string(r->uniform_int(2, 254));
            }
            if (used->insert(addr).second) return addr;
        }
        throw ValidationError("address pool exhausted in zone " + z.name);
    }
};

std::string pick_pool(const ScenarioTemplate& tpl, rng::Stream& r, const std::string& id) {
    const auto it = tpl.pools.pools.find(id);
    if (it == tpl.pools.pools.end()) throw ValidationError("template needs name pool '" + id + "'");
    return it->second[r.index(it->second.size())];
}

std::int64_t s_int(const ScenarioTemplate& t, rng::Stream& r, const std::string& path) {
    return sample(space_at(t.doc, path), r, t.pools, path).get<std::int64_t>();
}
double s_real(const ScenarioTemplate& t, rng::Stream& r, const std::string& path) {
    return sample(space_at(t.doc, path), r, t.pools, path).get<double>();
}
json s_any(const ScenarioTemplate& t, rng::Stream& r, const std::string& path) {
    return sample(space_at(t.doc, path), r, t.pools, path);
}

std::string unique_login(const std::string& first, const std::string& last,
                         std::set<std::string>& taken) {
    const std::string f = text::lower(first), l = text::lower(last);
    for (std::size_t n = 1; n <= f.size(); ++n) {
        const std::string cand = f.substr(0, n) + l;
        if (taken.insert(cand).second) return cand;
    }
    for (int i = 2; i < 100; ++i) {
        const std::string cand = f.substr(0, 1) + l + std::to_string(i);
        if (taken.insert(cand).second) return cand;
    }
    throw ValidationError("cannot derive a unique login for " + first + " " + last);
}

std::string rand_label(rng::Stream& r, int lo, int hi) {
    std::string out;
    const int n = static_cast<int>(r.uniform_int(lo, hi));
    for (int i = 0; i < n; ++i) out += static_cast<char>('a' + r.uniform_int(0, 25));
    return out;
}

} // namespace

ScenarioInstance instantiate(const ScenarioTemplate& tpl, std::uint64_t seed) {
    ScenarioInstance inst;
    inst.seed = seed;

    // window
    {
        auto r = rng::derive(seed, "window");
        const json start = s_any(tpl, r, "window.start_date");
        if (!start.is_string()) throw ValidationError("window.start_date must choose strings");
        auto day0 = tu::parse_date(start.get<std::string>());
        if (!day0) throw ValidationError("window.start_date: bad date " + start.dump());
        const auto days = s_int(tpl, r, "window.days");
        if (days < 4) throw ValidationError("window.days sampled below the 4-day minimum");
        inst.start = *day0;
        inst.end = *day0 + days * tu::usec_per_day;
    }

    // network
    std::set<std::string> used_addrs;
    {
        auto r = rng::derive(seed, "net");
        const std::string word = pick_pool(tpl, r, "org");
        const json tld = s_any(tpl, r, "network.org_tld");
        inst.org_domain = text::lower(word) + "." + tld.get<std::string>();

        const Space zone_class = space_at(tpl.doc, "network.zone_class");
        std::set<std::string> c_octets;
        const char* zone_names[] = {"intranet", "dmz", "internet", "vpn"};
        for (int i = 0; i < 4; ++i) {
            Zone z;
            z.name = zone_names[i];
            z.cls = sample(zone_class, r, tpl.pools, "network.zone_class").get<std::string>();
            if (z.cls == "a") {
                z.cidr = "10.0.0.0/8";
            } else if (z.cls == "b") {
                z.cidr = "172." + std::to_string(16 + i) + ".0.0/16";
            } else {
                std::string octet;
                do
                    octet = std::to_string(r.uniform_int(1, 254));
                while (!c_octets.insert(octet).second);
                z.cidr = "192.168." + octet + ".0/24";
            }
            inst.zones.push_back(std::move(z));
        }
    }

    const Zone& intranet = inst.zones[0];
    const Zone& dmz = inst.zones[1];
    const Zone& internet = inst.zones[2];
    const Zone& vpn = inst.zones[3];

    // hosts
    {
        auto r = rng::derive(seed, "hosts");
        AddrAlloc alloc{&used_addrs, &r};
        auto add = [&](const std::string& hostname, const std::string& role, const Zone& z,
                       const std::string& fqdn) {
            inst.hosts.push_back({hostname, role, z.name, alloc.take(z), fqdn, ""});
        };
        add("firewall", "firewall", intranet, "firewall." + inst.org_domain);
        add("intranet-server", "intranet-server", intranet, "intranet." + inst.org_domain);
        add("file-share", "file-share", intranet, "files." + inst.org_domain);
        add("vpn-server", "vpn-server", dmz, "vpn." + inst.org_domain);
        add("cloud-share", "cloud-share", dmz, "cloud." + inst.org_domain);
        add("web-server", "web-server", dmz, "www." + inst.org_domain);
        add("dns-server", "dns-server", internet, "resolver1." + pick_pool(tpl, r, "org") + ".net");

        const auto mail_count = s_int(tpl, r, "counts.mail_servers");
        add("mail", "mail-server", dmz, "mail." + inst.org_domain);
        std::set<std::string> provider_words;
        for (std::int64_t i = 1; i < mail_count; ++i) {
            std::string w;
            do
                w = text::lower(pick_pool(tpl, r, "org"));
            while (!provider_words.insert(w).second);
            const json tld = s_any(tpl, r, "network.org_tld");
            add("mail-" + w, "mail-server", internet, "mail." + w + "." + tld.get<std::string>());
        }
        add("attacker", "attacker", internet, "");
    }

    // users
    {
        auto r = rng::derive(seed, "users");
        AddrAlloc alloc{&used_addrs, &r};
        const auto n_internal = s_int(tpl, r, "counts.internal_employees");
        const auto n_remote = s_int(tpl, r, "counts.remote_employees");
        const auto n_external = s_int(tpl, r, "counts.external_users");
        // copy names now: the user loops below grow inst.hosts and would
        // invalidate pointers into it
        std::vector<std::string> mail_hosts, ext_mails;
        for (const auto* m : inst.hosts_by_role("mail-server")) {
            mail_hosts.push_back(m->hostname);
            if (m->zone == "internet") ext_mails.push_back(m->hostname);
        }

        json sites_doc = tpl.doc.contains("behavior") ? tpl.doc["behavior"].value("browse_sites", json::array())
                                                      : json::array();
        std::vector<std::string> site_pool;
        for (const auto& s : sites_doc) site_pool.push_back(s.get<std::string>());
        if (site_pool.empty()) throw ValidationError("behavior.browse_sites must list sites");

        std::set<std::string> taken_logins;
        const auto weight_catalog = behavior::weight_keys();
        const Space weight_space = space_at(tpl.doc, "users.edge_weight");

        auto make_user = [&](const std::string& kind) {
            UserProfile u;
            const std::string first = pick_pool(tpl, r, "first");
            const std::string last = pick_pool(tpl, r, "last");
            u.full_name = first + " " + last;
            u.login = unique_login(first, last, taken_logins);
            u.kind = kind;
            static const char pw_chars[] =
                "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
            const auto pw_len = r.uniform_int(10, 14);
            for (std::int64_t i = 0; i < pw_len; ++i)
                u.password += pw_chars[r.index(sizeof(pw_chars) - 1)];
            const json wh = s_any(tpl, r, "users.working_hours");
            u.work_start_min = wh["start_min"].get<int>();
            u.work_end_min = wh["end_min"].get<int>();
            u.wake_jitter_min = static_cast<int>(s_int(tpl, r, "users.wake_jitter_minutes"));
            if (kind == "external") {
                u.wp_role = "none";
                u.ssh_admin = false;
                u.share_role = "none";
                u.cloud_role = "none";
                if (ext_mails.empty())
                    throw ValidationError("external users need at least one external provider");
                u.mail_host = ext_mails[r.index(ext_mails.size())];
            } else {
                u.wp_role = s_any(tpl, r, "users.wordpress_role").get<std::string>();
                u.ssh_admin = r.unit() < s_real(tpl, r, "users.ssh_admin_share");
                u.share_role = s_any(tpl, r, "users.share_role").get<std::string>();
                u.cloud_role = s_any(tpl, r, "users.cloud_role").get<std::string>();
                u.mail_host = mail_hosts[r.index(mail_hosts.size())];
            }
            u.browser = s_any(tpl, r, "users.browser").get<std::string>();
            u.failed_login_p = s_real(tpl, r, "users.failed_login_probability");
            u.daily_actions = static_cast<int>(s_int(tpl, r, "users.daily_actions"));
            const char* idle_names[] = {"tiny", "small", "medium", "large"};
            for (int i = 0; i < 4; ++i) {
                const Space sp = space_at(tpl.doc, std::string("users.idle.") + idle_names[i]);
                const auto& rr = std::get<RealRange>(sp);
                u.idle[i] = {rr.lo, rr.hi};
            }
            const auto n_sites = s_int(tpl, r, "users.sites_per_user");
            std::set<std::size_t> chosen;
            while (chosen.size() < std::min<std::size_t>(n_sites, site_pool.size()))
                chosen.insert(r.index(site_pool.size()));
            for (auto i : chosen) u.sites.push_back(site_pool[i]);
            if (kind != "external") u.sites.push_back("intranet." + inst.org_domain);

            // raw weights, then normalize per source state
            std::map<std::string, double> raw;
            for (const auto& key : weight_catalog)
                raw[key] = sample(weight_space, r, tpl.pools, "users.edge_weight").get<double>();
            std::map<std::string, double> sums;
            for (const auto& [key, w] : raw) sums[key.substr(0, key.find("->"))] += w;
            for (auto& [key, w] : raw) w /= sums[key.substr(0, key.find("->"))];
            u.weights = std::move(raw);
            return u;
        };

        for (std::int64_t i = 0; i < n_internal; ++i) {
            UserProfile u = make_user("internal");
            u.host = "pc-" + u.login;
            inst.hosts.push_back({u.host, "internal", intranet.name, alloc.take(intranet), "", u.login});
            inst.users.push_back(std::move(u));
        }
        for (std::int64_t i = 0; i < n_remote; ++i) {
            UserProfile u = make_user("remote");
            u.host = "laptop-" + u.login;
            inst.hosts.push_back({u.host, "remote", internet.name, alloc.take(internet), "", u.login});
            u.vpn_ip = alloc.take(vpn);
            inst.users.push_back(std::move(u));
        }
        for (std::int64_t i = 0; i < n_external; ++i) {
            UserProfile u = make_user("external");
            u.host = "ext-" + u.login;
            inst.hosts.push_back({u.host, "external", internet.name, alloc.take(internet), "", u.login});
            inst.users.push_back(std::move(u));
        }

        // contacts need the full roster
        auto cr = rng::derive(seed, "users/contacts");
        for (auto& u : inst.users) {
            const double frac = s_real(tpl, cr, "users.contacts_fraction");
            for (const auto& other : inst.users) {
                if (other.login == u.login) continue;
                if (cr.unit() < frac) u.contacts.push_back(other.login);
            }
            if (u.contacts.empty() && inst.users.size() > 1) {
                // everyone mails someone
                std::size_t i = cr.index(inst.users.size());
                while (inst.users[i].login == u.login) i = cr.index(inst.users.size());
                u.contacts.push_back(inst.users[i].login);
            }
        }
    }

    // share contents
    {
        auto r = rng::derive(seed, "files");
        const auto count = s_int(tpl, r, "share.file_count");
        static const char* exts[] = {"pdf", "xlsx", "docx", "txt", "pptx"};
        static const char* stems[] = {"report", "budget", "minutes", "contract", "roadmap",
                                      "invoice", "summary", "plan", "draft", "overview"};
        std::set<std::string> names;
        for (std::int64_t i = 0; i < count; ++i) {
            std::string name;
            do {
                name = std::string(stems[r.index(10)]) + "_" + rand_label(r, 3, 6) + "_q" +
                       std::to_string(r.uniform_int(1, 4)) + "." + exts[r.index(5)];
            } while (!names.insert(name).second);
            inst.files.push_back({name, s_int(tpl, r, "share.file_kib") * 1024});
        }
    }

    // behavior knobs
    {
        auto r = rng::derive(seed, "behavior");
        inst.behavior.dns_cache_min = static_cast<int>(s_int(tpl, r, "behavior.dns_cache_minutes"));
        inst.behavior.infra_dns_per_day =
            static_cast<int>(s_int(tpl, r, "behavior.infra_dns_per_day"));
        inst.behavior.weekend_activity = s_real(tpl, r, "behavior.weekend_activity");
    }

    // attack knobs from the template; instance-derived facts are filled in
    // by plan_attack afterwards
    {
        auto r = rng::derive(seed, "attack/knobs");
        AttackPlan& a = inst.attack;
        a.enabled = tpl.doc.contains("attack") && tpl.doc["attack"].value("enabled", true);
        if (a.enabled) {
            a.day_offset = static_cast<int>(s_int(tpl, r, "attack.day_offset"));
            a.day_offset = std::min(a.day_offset, inst.days() - 1);
            if (a.day_offset < 3)
                throw ValidationError("attack.day_offset cannot reach day 3 in this window");
            a.start_min = static_cast<int>(s_int(tpl, r, "attack.start_minute"));
            a.scan_top_ports = static_cast<int>(s_int(tpl, r, "attack.scan_top_ports"));
            a.wpscan_mode = s_any(tpl, r, "attack.wpscan_mode").get<std::string>();
            a.dirb_recursive = s_any(tpl, r, "attack.dirb_recursive").get<bool>();
            a.dirb_case_insensitive = s_any(tpl, r, "attack.dirb_case_insensitive").get<bool>();
            a.webshell = rand_label(r, 6, 9) + ".php";
            a.crack_minutes = static_cast<int>(s_int(tpl, r, "attack.crack_minutes"));
            a.crack_mode = s_any(tpl, r, "attack.crack_mode").get<std::string>();
            a.terminal = "pts/" + std::to_string(r.uniform_int(0, 2));
            a.session_id = "c" + std::to_string(r.uniform_int(1, 9));
            a.reverse_port = static_cast<int>(s_int(tpl, r, "attack.reverse_port"));
            a.exfil_block = static_cast<int>(s_int(tpl, r, "attack.exfil_block_size"));
            a.exfil_subdomains = 200 / a.exfil_block;
            a.exfil_days = static_cast<int>(s_int(tpl, r, "attack.exfil_days"));
            a.exfil_days = std::min(a.exfil_days, a.day_offset - 1);
            a.exfil_compress = s_any(tpl, r, "attack.exfil_compression").get<bool>();
            a.exfil_forced_ip = s_any(tpl, r, "attack.exfil_forced_ip").get<bool>();
            a.exfil_verbose = s_any(tpl, r, "attack.exfil_verbosity").get<bool>();
            // a DGA-flavored domain that never collides with legitimate names
            std::string domain;
            do {
                static const char* tlds[] = {"xyz", "top", "info"};
                domain = rand_label(r, 5, 9) + std::to_string(r.uniform_int(0, 9)) + "." +
                         tlds[r.index(3)];
                bool clash = text::ends_with(domain, inst.org_domain);
                for (const auto& h : inst.hosts) clash |= !h.fqdn.empty() && h.fqdn.find(domain) != std::string::npos;
                if (clash) domain.clear();
            } while (domain.empty());
            a.exfil_domain = domain;

            // facts derived from the sampled population
            const Host* attacker = inst.host_by_role("attacker");
            a.attacker_addr = attacker->addr;
            std::set<std::string> taken_names;
            for (const auto& u : inst.users) taken_names.insert(u.full_name);
            std::string name;
            do
                name = pick_pool(tpl, r, "first") + " " + pick_pool(tpl, r, "last");
            while (!taken_names.insert(name).second);
            a.attacker_name = name;
            AddrAlloc alloc{&used_addrs, &r};
            a.vpn_ip = alloc.take(vpn);

            std::vector<const UserProfile*> remote, internal;
            for (const auto& u : inst.users) {
                if (u.kind == "remote") remote.push_back(&u);
                if (u.kind == "internal") internal.push_back(&u);
            }
            if (remote.empty())
                throw ValidationError("attack needs a remote employee whose VPN credentials leak");
            if (internal.empty())
                throw ValidationError("attack needs an internal employee account to crack");
            a.vpn_user = remote[r.index(remote.size())]->login;
            a.crack_user = internal[r.index(internal.size())]->login;

            a.scan_hosts = {"intranet-server"};
            std::vector<std::string> extras = {"file-share", "cloud-share", "web-server",
                                               "mail", "vpn-server"};
            const auto n_extra = s_int(tpl, r, "attack.scan_extra_hosts");
            for (std::int64_t i = 0; i < n_extra && !extras.empty(); ++i) {
                const auto k = r.index(extras.size());
                a.scan_hosts.push_back(extras[k]);
                extras.erase(extras.begin() + static_cast<std::ptrdiff_t>(k));
            }

            auto draw_distinct = [&](const std::vector<const char*>& pool, std::int64_t n) {
                std::vector<std::string> out;
                std::vector<const char*> left = pool;
                for (std::int64_t i = 0; i < n && !left.empty(); ++i) {
                    const auto k = r.index(left.size());
                    out.emplace_back(left[k]);
                    left.erase(left.begin() + static_cast<std::ptrdiff_t>(k));
                }
                return out;
            };
            a.webshell_cmds = draw_distinct(attack::vocab::webshell_commands(),
                                            s_int(tpl, r, "attack.webshell_cmd_count"));
            a.root_cmd = attack::vocab::root_commands()[r.index(
                attack::vocab::root_commands().size())];
            a.reverse_cmds = draw_distinct(attack::vocab::reverse_shell_commands(),
                                           s_int(tpl, r, "attack.reverse_cmd_count"));

            auto n_exfil = s_int(tpl, r, "attack.exfil_file_count");
            n_exfil = std::min<std::int64_t>(n_exfil, static_cast<std::int64_t>(inst.files.size()));
            std::set<std::size_t> picked;
            while (static_cast<std::int64_t>(picked.size()) < n_exfil)
                picked.insert(r.index(inst.files.size()));
            for (auto i : picked) a.exfil_files.push_back(inst.files[i].name);
        }
    }

    return inst;
}

} // namespace logbed::model
