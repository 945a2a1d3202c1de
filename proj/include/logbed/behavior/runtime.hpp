#pragma once

#include <memory>
#include <string>
#include <vector>

#include "logbed/behavior/topology.hpp"
#include "logbed/sim/world.hpp"

namespace logbed::behavior {

// Walks every employee through their days: wake-up, weighted hops between
// the activity machines, pacing breaks sized to stretch the action budget
// over the workday, and the end-of-day teardown. All log manifestations of
// normal behavior originate here.
class UserRuntime {
public:
    explicit UserRuntime(sim::World& w);
    ~UserRuntime();

    // registers the wake events; call once before the engine runs
    void install();

private:
    struct Session;

    sim::World& w_;
    std::vector<std::unique_ptr<Session>> sims_;

    void begin_day(std::size_t i, int day, bool weekend);
    void end_day(std::size_t i, int epoch);
    void next_move(std::size_t i);
    void enter_machine(std::size_t i, const MachineDef* m);
    void apply_edge(std::size_t i, const EdgeDef& e);
    void emit_action(std::size_t i, const std::string& action);

    void vpn_up(Session& s);
    void vpn_down(Session& s);
    void ssh_teardown(Session& s);

    void act_cloud(Session& s, const std::string& action);
    void act_webmail(Session& s, const std::string& action);
    void act_wordpress(Session& s, const std::string& action);
    void act_browsing(Session& s, const std::string& action);
    void act_ssh(Session& s, const std::string& action);
    void act_fileshare(Session& s, const std::string& action);

    void wp_hit(Session& s, const std::string& method, const std::string& path, int status,
                const std::string& tag = "normal");
};

// Everything the machines do on their own: cron sessions, daemon chatter,
// log rotation markers, mail queue runs, health probes, the metrics feed,
// and the infrastructure DNS load.
class BackgroundRuntime {
public:
    explicit BackgroundRuntime(sim::World& w);
    ~BackgroundRuntime();

    void install();

private:
    struct Metrics;

    sim::World& w_;
    std::vector<std::unique_ptr<Metrics>> metrics_;

    void cron_job(const model::Host& h, bool with_audit);
    void monitor_tick(const model::Host& h, Metrics& m, bool crack_host);
    void infra_query();
};

} // namespace logbed::behavior
