#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "logbed/core/rng.hpp"
#include "logbed/logsynth/sinks.hpp"
#include "logbed/model/model.hpp"
#include "logbed/sim/engine.hpp"

namespace logbed::sim {

// Label windows are padded by this much on both sides so boundary jitter in
// rendered timestamps never drops a manifestation.
constexpr timeutil::UsecTime kLabelSlack = 2 * timeutil::usec_per_sec;

// Shared state every emitter works against: the virtual clock, the output
// sinks, name resolution, id counters, and the few cross-cutting markers that
// coordinate independent emitters (the cracking window for the metrics feed).
class World {
public:
    World(const model::ScenarioInstance& instance, logsynth::SinkSet& out);

    const model::ScenarioInstance& inst;
    logsynth::SinkSet& sinks;
    Engine engine;

    // role shortcuts; a checked instance always carries one of each
    const model::Host* firewall = nullptr;
    const model::Host* dns_server = nullptr; // the upstream resolver out on the internet
    const model::Host* vpn_server = nullptr;
    const model::Host* intranet_server = nullptr;
    const model::Host* file_share = nullptr;
    const model::Host* cloud_share = nullptr;
    const model::Host* web_server = nullptr;
    const model::Host* org_mail = nullptr; // the dmz provider
    const model::Host* attacker_host = nullptr;

    // intranet and dmz machines, the population that produces background load
    std::vector<const model::Host*> org_servers;

    timeutil::UsecTime now() const { return engine.now(); }

    // one independent stream per consumer, created on first use
    rng::Stream& stream(const std::string& label);

    // short-lived process ids advance monotonically per host; daemon pids are
    // fixed for the whole run
    int fresh_pid(const std::string& hostname);
    int stable_pid(const std::string& hostname, const std::string& proc);

    std::string next_queue_id(const std::string& hostname);

    // the metrics emitter reports elevated load inside this window; set by
    // the password-cracking step
    timeutil::UsecTime crack_start = 0;
    timeutil::UsecTime crack_end = 0;

    bool host_has(const std::string& hostname, const std::string& rel) const;

    // append one line, stamped at the current virtual time
    void line(const model::Host& host, const std::string& rel, const std::string& text,
              const std::string& tag = "normal");

    // fqdn to address; org hosts resolve to their assigned address, unknown
    // names hash into the documentation ranges
    std::string resolve(const std::string& name) const;
    bool org_name(const std::string& name) const;

    // resolver round trip with the full log chain. Org-side clients talk to
    // the firewall forwarder, internet clients to the upstream resolver.
    // query_only stops after the query line (locally refused lookups);
    // reply_ip overrides the answer.
    void dns_query(const std::string& client_addr, const std::string& client_zone,
                   const std::string& name, const std::string& qtype, const std::string& tag,
                   bool query_only = false, const std::string& reply_ip = "");

    // client-side cache in front of dns_query; repeat lookups inside the
    // configured ttl stay silent
    void dns_lookup(const std::string& client_addr, const std::string& client_zone,
                    const std::string& name, const std::string& tag);

    // one audit record; serial numbers stay monotonic per host
    void audit_event(const model::Host& host, const std::string& type,
                     std::vector<logsynth::Field> kvs, const std::string& tag);
    // several records sharing one event id (SYSCALL plus its PATH entries)
    void audit_group(const model::Host& host,
                     const std::vector<std::pair<std::string, std::vector<logsynth::Field>>>& recs,
                     const std::string& tag);
    // SYSCALL plus EXECVE pair for one executed command, sharing an event id.
    // Returns the pid the kernel reported.
    int audit_exec(const model::Host& host, int ppid, int uid, int euid,
                   const std::string& command, const std::string& tag);

    std::string mail_domain(const model::Host& provider) const;
    std::string mail_addr(const model::UserProfile& u) const;

    // exim bookkeeping on the sending provider plus the relay hop when the
    // recipient lives elsewhere
    void deliver_mail(const model::UserProfile& from, const model::UserProfile& to,
                      std::int64_t size, const std::string& tag);

private:
    std::map<std::string, rng::Stream> streams_;
    std::map<std::string, int> fresh_pids_;
    std::map<std::string, int> stable_pids_; // hostname \n proc
    std::map<std::string, std::int64_t> audit_serials_;
    std::map<std::string, std::uint64_t> queue_counts_;
    std::map<std::string, timeutil::UsecTime> dns_cache_; // client \n name, expiry
    std::map<std::string, std::string> fqdn_addr_;
    std::set<std::string> layout_; // hostname \n rel

    std::int64_t next_audit_serial(const std::string& hostname);
};

} // namespace logbed::sim
