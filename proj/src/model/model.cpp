#include "logbed/model/model.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "logbed/core/errors.hpp"
#include "logbed/core/hashio.hpp"
#include "logbed/core/text.hpp"

namespace logbed::model {

using nlohmann::json;
namespace tu = logbed::timeutil;

const Host* ScenarioInstance::host_by_name(const std::string& hostname) const {
    for (const auto& h : hosts)
        if (h.hostname == hostname) return &h;
    return nullptr;
}

const Host* ScenarioInstance::host_by_role(const std::string& role) const {
    for (const auto& h : hosts)
        if (h.role == role) return &h;
    return nullptr;
}

std::vector<const Host*> ScenarioInstance::hosts_by_role(const std::string& role) const {
    std::vector<const Host*> out;
    for (const auto& h : hosts)
        if (h.role == role) out.push_back(&h);
    return out;
}

const UserProfile* ScenarioInstance::user(const std::string& login) const {
    for (const auto& u : users)
        if (u.login == login) return &u;
    return nullptr;
}

int ScenarioInstance::days() const {
    return static_cast<int>((end - start) / tu::usec_per_day);
}

namespace {

json idle_json(const std::array<std::pair<double, double>, 4>& idle) {
    json out = json::array();
    for (const auto& [lo, hi] : idle) out.push_back(json::array({lo, hi}));
    return out;
}

std::array<std::pair<double, double>, 4> idle_from_json(const json& j) {
    std::array<std::pair<double, double>, 4> out{};
    for (std::size_t i = 0; i < 4; ++i)
        out[i] = {j.at(i).at(0).get<double>(), j.at(i).at(1).get<double>()};
    return out;
}

} // namespace

json ScenarioInstance::to_json() const {
    json j;
    j["seed"] = seed;
    j["window"] = {{"start", tu::rfc3339(start)}, {"end", tu::rfc3339(end)}};
    j["org_domain"] = org_domain;
    j["zones"] = json::array();
    for (const auto& z : zones)
        j["zones"].push_back({{"name", z.name}, {"class", z.cls}, {"cidr", z.cidr}});
    j["hosts"] = json::array();
    for (const auto& h : hosts) {
        json hj = {{"hostname", h.hostname}, {"role", h.role}, {"zone", h.zone},
                   {"addr", h.addr}};
        if (!h.fqdn.empty()) hj["fqdn"] = h.fqdn;
        if (!h.owner.empty()) hj["owner"] = h.owner;
        j["hosts"].push_back(std::move(hj));
    }
    j["users"] = json::array();
    for (const auto& u : users) {
        json uj = {{"login", u.login},
                   {"full_name", u.full_name},
                   {"password", u.password},
                   {"kind", u.kind},
                   {"host", u.host},
                   {"work_start_min", u.work_start_min},
                   {"work_end_min", u.work_end_min},
                   {"wake_jitter_min", u.wake_jitter_min},
                   {"wp_role", u.wp_role},
                   {"ssh_admin", u.ssh_admin},
                   {"share_role", u.share_role},
                   {"cloud_role", u.cloud_role},
                   {"mail_host", u.mail_host},
                   {"browser", u.browser},
                   {"contacts", u.contacts},
                   {"sites", u.sites},
                   {"failed_login_p", u.failed_login_p},
                   {"daily_actions", u.daily_actions},
                   {"idle", idle_json(u.idle)},
                   {"weights", u.weights}};
        if (!u.vpn_ip.empty()) uj["vpn_ip"] = u.vpn_ip;
        j["users"].push_back(std::move(uj));
    }
    j["files"] = json::array();
    for (const auto& f : files) j["files"].push_back({{"name", f.name}, {"size", f.size}});
    j["behavior"] = {{"dns_cache_min", behavior.dns_cache_min},
                     {"infra_dns_per_day", behavior.infra_dns_per_day},
                     {"weekend_activity", behavior.weekend_activity}};
    const AttackPlan& a = attack;
    j["attack"] = {{"enabled", a.enabled},
                   {"attacker_name", a.attacker_name},
                   {"attacker_addr", a.attacker_addr},
                   {"vpn_user", a.vpn_user},
                   {"vpn_ip", a.vpn_ip},
                   {"day_offset", a.day_offset},
                   {"start_min", a.start_min},
                   {"scan_top_ports", a.scan_top_ports},
                   {"scan_hosts", a.scan_hosts},
                   {"wpscan_mode", a.wpscan_mode},
                   {"dirb_recursive", a.dirb_recursive},
                   {"dirb_case_insensitive", a.dirb_case_insensitive},
                   {"webshell", a.webshell},
                   {"webshell_cmds", a.webshell_cmds},
                   {"crack_user", a.crack_user},
                   {"crack_mode", a.crack_mode},
                   {"crack_minutes", a.crack_minutes},
                   {"terminal", a.terminal},
                   {"session_id", a.session_id},
                   {"root_cmd", a.root_cmd},
                   {"reverse_port", a.reverse_port},
                   {"reverse_cmds", a.reverse_cmds},
                   {"exfil_domain", a.exfil_domain},
                   {"exfil_block", a.exfil_block},
                   {"exfil_subdomains", a.exfil_subdomains},
                   {"exfil_days", a.exfil_days},
                   {"exfil_compress", a.exfil_compress},
                   {"exfil_forced_ip", a.exfil_forced_ip},
                   {"exfil_verbose", a.exfil_verbose},
                   {"exfil_files", a.exfil_files}};
    return j;
}

ScenarioInstance ScenarioInstance::from_json(const json& j) {
    ScenarioInstance inst;
    try {
        inst.seed = j.at("seed").get<std::uint64_t>();
        auto start = tu::parse_rfc3339(j.at("window").at("start").get<std::string>());
        auto end = tu::parse_rfc3339(j.at("window").at("end").get<std::string>());
        if (!start || !end) throw ValidationError("instance: bad window stamps");
        inst.start = *start;
        inst.end = *end;
        inst.org_domain = j.at("org_domain").get<std::string>();
        for (const auto& zj : j.at("zones"))
            inst.zones.push_back({zj.at("name").get<std::string>(),
                                  zj.at("class").get<std::string>(),
                                  zj.at("cidr").get<std::string>()});
        for (const auto& hj : j.at("hosts")) {
            Host h;
            h.hostname = hj.at("hostname").get<std::string>();
            h.role = hj.at("role").get<std::string>();
            h.zone = hj.at("zone").get<std::string>();
            h.addr = hj.at("addr").get<std::string>();
            h.fqdn = hj.value("fqdn", "");
            h.owner = hj.value("owner", "");
            inst.hosts.push_back(std::move(h));
        }
        for (const auto& uj : j.at("users")) {
            UserProfile u;
            u.login = uj.at("login").get<std::string>();
            u.full_name = uj.at("full_name").get<std::string>();
            u.password = uj.at("password").get<std::string>();
            u.kind = uj.at("kind").get<std::string>();
            u.host = uj.at("host").get<std::string>();
            u.work_start_min = uj.at("work_start_min").get<int>();
            u.work_end_min = uj.at("work_end_min").get<int>();
            u.wake_jitter_min = uj.at("wake_jitter_min").get<int>();
            u.wp_role = uj.at("wp_role").get<std::string>();
            u.ssh_admin = uj.at("ssh_admin").get<bool>();
            u.share_role = uj.at("share_role").get<std::string>();
            u.cloud_role = uj.at("cloud_role").get<std::string>();
            u.mail_host = uj.at("mail_host").get<std::string>();
            u.browser = uj.at("browser").get<std::string>();
            u.contacts = uj.at("contacts").get<std::vector<std::string>>();
            u.sites = uj.at("sites").get<std::vector<std::string>>();
            u.failed_login_p = uj.at("failed_login_p").get<double>();
            u.daily_actions = uj.at("daily_actions").get<int>();
            u.idle = idle_from_json(uj.at("idle"));
            u.weights = uj.at("weights").get<std::map<std::string, double>>();
            u.vpn_ip = uj.value("vpn_ip", "");
            inst.users.push_back(std::move(u));
        }
        for (const auto& fj : j.at("files"))
            inst.files.push_back(
                {fj.at("name").get<std::string>(), fj.at("size").get<std::int64_t>()});
        const auto& bj = j.at("behavior");
        inst.behavior.dns_cache_min = bj.at("dns_cache_min").get<int>();
        inst.behavior.infra_dns_per_day = bj.at("infra_dns_per_day").get<int>();
        inst.behavior.weekend_activity = bj.at("weekend_activity").get<double>();
        const auto& aj = j.at("attack");
        AttackPlan& a = inst.attack;
        a.enabled = aj.at("enabled").get<bool>();
        a.attacker_name = aj.at("attacker_name").get<std::string>();
        a.attacker_addr = aj.at("attacker_addr").get<std::string>();
        a.vpn_user = aj.at("vpn_user").get<std::string>();
        a.vpn_ip = aj.at("vpn_ip").get<std::string>();
        a.day_offset = aj.at("day_offset").get<int>();
        a.start_min = aj.at("start_min").get<int>();
        a.scan_top_ports = aj.at("scan_top_ports").get<int>();
        a.scan_hosts = aj.at("scan_hosts").get<std::vector<std::string>>();
        a.wpscan_mode = aj.at("wpscan_mode").get<std::string>();
        a.dirb_recursive = aj.at("dirb_recursive").get<bool>();
        a.dirb_case_insensitive = aj.at("dirb_case_insensitive").get<bool>();
        a.webshell = aj.at("webshell").get<std::string>();
        a.webshell_cmds = aj.at("webshell_cmds").get<std::vector<std::string>>();
        a.crack_user = aj.at("crack_user").get<std::string>();
        a.crack_mode = aj.at("crack_mode").get<std::string>();
        a.crack_minutes = aj.at("crack_minutes").get<int>();
        a.terminal = aj.at("terminal").get<std::string>();
        a.session_id = aj.at("session_id").get<std::string>();
        a.root_cmd = aj.at("root_cmd").get<std::string>();
        a.reverse_port = aj.at("reverse_port").get<int>();
        a.reverse_cmds = aj.at("reverse_cmds").get<std::vector<std::string>>();
        a.exfil_domain = aj.at("exfil_domain").get<std::string>();
        a.exfil_block = aj.at("exfil_block").get<int>();
        a.exfil_subdomains = aj.at("exfil_subdomains").get<int>();
        a.exfil_days = aj.at("exfil_days").get<int>();
        a.exfil_compress = aj.at("exfil_compress").get<bool>();
        a.exfil_forced_ip = aj.at("exfil_forced_ip").get<bool>();
        a.exfil_verbose = aj.at("exfil_verbose").get<bool>();
        a.exfil_files = aj.at("exfil_files").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("instance document malformed: ") + e.what());
    }
    return inst;
}

ScenarioTemplate ScenarioTemplate::from_json(const json& doc,
                                             const std::filesystem::path& base_dir) {
    if (!doc.is_object()) throw ValidationError("template root must be an object");
    ScenarioTemplate tpl;
    tpl.doc = doc;
    if (doc.contains("pools")) {
        if (!doc["pools"].is_object()) throw ValidationError("template 'pools' must map ids to files");
        for (const auto& [id, rel] : doc["pools"].items()) {
            if (!rel.is_string()) throw ValidationError("pool '" + id + "' must be a file path");
            const auto path = base_dir / rel.get<std::string>();
            std::ifstream in(path);
            if (!in) throw ValidationError("pool '" + id + "': cannot open " + path.string());
            std::vector<std::string> entries;
            std::string line;
            while (std::getline(in, line)) {
                while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
                    line.pop_back();
                if (!line.empty()) entries.push_back(line);
            }
            if (entries.empty()) throw ValidationError("pool '" + id + "' is empty");
            tpl.pools.pools[id] = std::move(entries);
        }
    }
    return tpl;
}

ScenarioTemplate ScenarioTemplate::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open template: " + file.string());
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ValidationError("template is not valid json: " + file.string());
    return from_json(doc, file.parent_path());
}

void check_instance(const ScenarioInstance& inst) {
    auto fail = [](const std::string& why) { throw ValidationError("instance check: " + why); };

    if (inst.end <= inst.start) fail("window is empty");
    if (inst.days() < 4) fail("window shorter than 4 days");
    if (inst.zones.size() != 4) fail("expected 4 zones");
    for (const auto& z : inst.zones)
        if (z.cls != "a" && z.cls != "b" && z.cls != "c") fail("zone class out of range");

    const std::size_t user_hosts = inst.users.size();
    if (user_hosts < 9 || user_hosts > 27) fail("user host count outside 9..27");
    const auto mails = inst.hosts_by_role("mail-server");
    if (mails.size() < 2 || mails.size() > 4) fail("mail server count outside 2..4");

    std::set<std::string> addrs, names, logins;
    for (const auto& h : inst.hosts) {
        if (!addrs.insert(h.addr).second) fail("duplicate address " + h.addr);
        if (!names.insert(h.hostname).second) fail("duplicate hostname " + h.hostname);
    }
    for (const char* role : {"firewall", "dns-server", "vpn-server", "intranet-server",
                             "file-share", "cloud-share", "web-server", "attacker"})
        if (inst.hosts_by_role(role).size() != 1) fail(std::string("need exactly one ") + role);

    for (const auto& u : inst.users) {
        if (!logins.insert(u.login).second) fail("duplicate login " + u.login);
        if (u.work_start_min < 5 * 60 || u.work_start_min > 9 * 60)
            fail(u.login + ": work start outside 05:00..09:00");
        if (u.work_end_min < 17 * 60 || u.work_end_min > 22 * 60)
            fail(u.login + ": work end outside 17:00..22:00");
        if (u.work_start_min >= u.work_end_min) fail(u.login + ": work window inverted");
        if (!inst.host_by_name(u.host)) fail(u.login + ": host missing");
        if (u.kind == "remote") {
            if (u.vpn_ip.empty()) fail(u.login + ": remote user without tunnel address");
            if (!addrs.insert(u.vpn_ip).second) fail("duplicate address " + u.vpn_ip);
        }
        for (const auto& [lo, hi] : u.idle)
            if (!(lo > 0 && lo <= hi)) fail(u.login + ": idle range invalid");
        // outgoing weights of each state sum to one
        std::map<std::string, double> sums;
        for (const auto& [key, w] : u.weights) {
            if (w < 0) fail(u.login + ": negative weight");
            const auto arrow = key.find("->");
            if (arrow == std::string::npos) fail(u.login + ": weight key " + key);
            sums[key.substr(0, arrow)] += w;
        }
        for (const auto& [state, sum] : sums)
            if (std::abs(sum - 1.0) > 1e-9)
                fail(u.login + ": weights of " + state + " sum to " + std::to_string(sum));
    }

    const AttackPlan& a = inst.attack;
    if (a.enabled) {
        if (a.day_offset < 3) fail("attack day before day 3");
        if (a.day_offset > inst.days() - 1) fail("attack day outside window");
        if (a.exfil_days < 1 || a.exfil_days > a.day_offset - 1)
            fail("exfiltration must end at least one day before the attack day");
        if (a.exfil_block < 32 || a.exfil_block > 63) fail("exfil block size outside 32..63");
        if (a.exfil_subdomains != 200 / a.exfil_block) fail("exfil subdomain count mismatch");
        if (a.scan_top_ports < 100 || a.scan_top_ports > 2000) fail("scan ports outside 100..2000");
        if (a.reverse_port < 1100 || a.reverse_port > 65000) fail("reverse port outside range");
        if (a.crack_minutes < 30 || a.crack_minutes > 90) fail("crack duration outside 30..90");
        if (!a.vpn_ip.empty() && !addrs.insert(a.vpn_ip).second)
            fail("attacker tunnel address collides");
        if (!inst.user(a.vpn_user)) fail("stolen credentials reference unknown user");
        if (!inst.user(a.crack_user)) fail("crack target references unknown user");
        for (const auto& h : a.scan_hosts)
            if (!inst.host_by_name(h)) fail("scan host missing: " + h);
        for (const auto& f : a.exfil_files) {
            bool found = false;
            for (const auto& sf : inst.files) found |= sf.name == f;
            if (!found) fail("exfil file missing from share: " + f);
        }
    }
}

std::string canonical_instance_text(const ScenarioInstance& inst) {
    return inst.to_json().dump(2) + "\n";
}

ScenarioInstance load_instance(const std::filesystem::path& file) {
    json doc = json::parse(hashio::read_file(file), nullptr, false);
    if (doc.is_discarded())
        throw ValidationError("instance is not valid json: " + file.string());
    return ScenarioInstance::from_json(doc);
}

} // namespace logbed::model
