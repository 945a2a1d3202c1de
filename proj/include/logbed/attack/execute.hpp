#pragma once

#include <string>

#include "logbed/attack/schedule.hpp"
#include "logbed/sim/world.hpp"

namespace logbed::attack {

// Emits every attack manifestation onto the shared clock. Each step writes
// its log lines on the affected hosts and appends one record to the
// attacker's own trace when it finishes.
class AttackRuntime {
public:
    AttackRuntime(sim::World& w, AttackSchedule sched);

    // Schedules all step events. The cracking window markers are set here,
    // before the clock starts, so the metrics feed sees them from tick one.
    void install();

    const AttackSchedule& schedule() const { return sched_; }

private:
    sim::World& w_;
    AttackSchedule sched_;
    std::string tunnel_;   // address the vpn server hands the attacker
    std::string shell_;    // uploaded webshell url path
    int vpn_port_ = 0;

    rng::Stream& rng();

    void record(const StepPlan& p, nlohmann::json facts);
    void http(const std::string& method, const std::string& path, int status,
              std::int64_t bytes, const std::string& agent, const std::string& tag);
    void kern(const std::string& chain, const std::string& verdict, const std::string& src,
              const std::string& dst, const std::string& proto, int dpt);
    void shell_exec(const std::string& cmd, const std::string& tag);

    void install_vpn_connect(const StepPlan& p);
    void install_traceroute(const StepPlan& p);
    void install_network_scan(const StepPlan& p);
    void install_dns_scan(const StepPlan& p);
    void install_service_scan(const StepPlan& p);
    void install_wpscan(const StepPlan& p);
    void install_dirb(const StepPlan& p);
    void install_webshell_upload(const StepPlan& p);
    void install_webshell_cmd(const StepPlan& p);
    void install_db_dump(const StepPlan& p);
    void install_crack(const StepPlan& p);
    void install_escalate(const StepPlan& p);
    void install_escalated_cmd(const StepPlan& p);
    void install_reverse_shell(const StepPlan& p);
    void install_dnsteal(const StepPlan& p);
};

} // namespace logbed::attack
