#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "logbed/core/time.hpp"
#include "logbed/model/space.hpp"

namespace logbed::model {

struct Zone {
    std::string name;  // intranet | dmz | internet | vpn
    std::string cls;   // a | b | c
    std::string cidr;
};

struct Host {
    std::string hostname;
    std::string role; // firewall, dns-server, vpn-server, intranet-server, file-share,
                      // cloud-share, web-server, mail-server, internal, remote, external,
                      // attacker
    std::string zone;
    std::string addr;
    std::string fqdn;  // servers and providers
    std::string owner; // employee hosts: the user's login
};

struct UserProfile {
    std::string login;
    std::string full_name;
    std::string password;
    std::string kind; // internal | remote | external
    std::string host;
    int work_start_min = 0;
    int work_end_min = 0;
    int wake_jitter_min = 0;
    std::string wp_role;    // editor | admin | none
    bool ssh_admin = false;
    std::string share_role; // employee | mgmt | acc | admin | none
    std::string cloud_role;
    std::string mail_host;  // provider hostname
    std::string browser;
    std::vector<std::string> contacts; // other logins
    std::vector<std::string> sites;    // browsing targets (fqdns)
    double failed_login_p = 0.0;
    int daily_actions = 0;
    // tiny, small, medium, large, in seconds
    std::array<std::pair<double, double>, 4> idle{};
    // normalized per source state over the full catalog
    std::map<std::string, double> weights;
    std::string vpn_ip; // remote users only
};

struct ShareFile {
    std::string name;
    std::int64_t size = 0; // bytes
};

struct AttackPlan {
    bool enabled = true;
    std::string attacker_name;
    std::string attacker_addr; // internet-zone address
    std::string vpn_user;      // whose credentials were stolen
    std::string vpn_ip;        // tunnel address assigned to the attacker
    int day_offset = 3;        // attack day, relative to window start
    int start_min = 0;         // minute of day the chain begins
    int scan_top_ports = 100;
    std::vector<std::string> scan_hosts; // hostnames probed during service-scan
    std::string wpscan_mode;             // passive | mixed
    bool dirb_recursive = false;
    bool dirb_case_insensitive = false;
    std::string webshell; // uploaded file name
    std::vector<std::string> webshell_cmds;
    std::string crack_user;
    std::string crack_mode; // online | offline
    int crack_minutes = 30;
    std::string terminal;   // pts/N
    std::string session_id; // cN
    std::string root_cmd;   // single command after COMMAND=list
    int reverse_port = 1100;
    std::vector<std::string> reverse_cmds;
    std::string exfil_domain;
    int exfil_block = 32;
    int exfil_subdomains = 6;
    int exfil_days = 1;
    bool exfil_compress = false;
    bool exfil_forced_ip = false;
    bool exfil_verbose = false;
    std::vector<std::string> exfil_files;
};

struct BehaviorParams {
    int dns_cache_min = 600;    // client resolver cache
    int infra_dns_per_day = 150;
    double weekend_activity = 0.35;
};

struct ScenarioInstance {
    std::uint64_t seed = 0;
    timeutil::UsecTime start = 0;
    timeutil::UsecTime end = 0;
    std::string org_domain;
    std::vector<Zone> zones;
    std::vector<Host> hosts;
    std::vector<UserProfile> users;
    std::vector<ShareFile> files;
    BehaviorParams behavior;
    AttackPlan attack;

    const Host* host_by_name(const std::string& hostname) const;
    const Host* host_by_role(const std::string& role) const; // first match
    std::vector<const Host*> hosts_by_role(const std::string& role) const;
    const UserProfile* user(const std::string& login) const;
    int days() const;

    nlohmann::json to_json() const;
    static ScenarioInstance from_json(const nlohmann::json& j);
};

struct ScenarioTemplate {
    nlohmann::json doc;
    PoolTable pools;

    // Loads and validates; pool paths resolve relative to the template file.
    static ScenarioTemplate load(const std::filesystem::path& file);
    static ScenarioTemplate from_json(const nlohmann::json& doc,
                                      const std::filesystem::path& base_dir);
};

// Resolves every parameter space. The attack plan is completed separately by
// plan_attack (attack module); this fills everything else and the plan's
// sampled knobs.
ScenarioInstance instantiate(const ScenarioTemplate& tpl, std::uint64_t seed);

// Post-sampling consistency checks (address uniqueness, window bounds,
// weight normalization, ...). Throws ValidationError.
void check_instance(const ScenarioInstance& inst);

// Canonical serialization: sorted keys, two-space indent, trailing newline.
std::string canonical_instance_text(const ScenarioInstance& inst);
ScenarioInstance load_instance(const std::filesystem::path& file);

} // namespace logbed::model
