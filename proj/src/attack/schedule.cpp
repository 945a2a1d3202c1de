#include "logbed/attack/schedule.hpp"

#include <algorithm>
#include <stdexcept>

#include "logbed/core/errors.hpp"

namespace logbed::attack {

using timeutil::UsecTime;
using timeutil::usec_per_day;
using timeutil::usec_per_hour;
using timeutil::usec_per_min;
using timeutil::usec_per_sec;

const std::vector<std::string>& step_ids() {
    static const std::vector<std::string> ids = {
        "vpn-connect",    "traceroute",    "network-scan", "dns-scan",
        "service-scan",   "wpscan",        "dirb-scan",    "webshell-upload",
        "webshell-cmd",   "db-dump",       "crack",        "escalate",
        "escalated-cmd",  "reverse-shell", "dnsteal",
    };
    return ids;
}

const StepPlan& AttackSchedule::step(const std::string& id) const {
    for (const auto& s : steps)
        if (s.id == id) return s;
    throw std::out_of_range("unknown attack step: " + id);
}

namespace {

UsecTime span_sec(rng::Stream& r, int lo, int hi) {
    return static_cast<UsecTime>(r.uniform_int(lo, hi)) * usec_per_sec;
}

// Round up to the next whole minute on the epoch grid. Metrics ticks run on
// the same grid, so an aligned window covers an exact tick count.
UsecTime align_minute(UsecTime t) {
    return (t + usec_per_min - 1) / usec_per_min * usec_per_min;
}

} // namespace

AttackSchedule plan_attack(const model::ScenarioInstance& inst, rng::Stream& r) {
    const auto& a = inst.attack;
    const int window_days = inst.days();
    if (window_days < 4)
        throw logbed::ValidationError("attack planning needs a window of at least 4 days");
    if (a.day_offset < 1 || a.day_offset >= window_days)
        throw logbed::ValidationError("attack day offset falls outside the window");

    const UsecTime day_start = inst.start + static_cast<UsecTime>(a.day_offset) * usec_per_day;
    const UsecTime day_end = day_start + usec_per_day;

    // Durations for the chain, drawn up front so a late start can be pulled
    // back without changing any of them.
    struct Piece {
        std::string id;
        UsecTime dur;
        UsecTime gap_after;
    };
    std::vector<Piece> chain;
    auto add = [&](const std::string& id, UsecTime dur) {
        chain.push_back({id, dur, span_sec(r, 10, 90)});
    };
    add("vpn-connect", span_sec(r, 8, 15));
    add("traceroute", span_sec(r, 20, 45));
    add("network-scan", span_sec(r, 60, 180));
    add("dns-scan", span_sec(r, 45, 120));
    add("service-scan", span_sec(r, 180, 420));
    add("wpscan", span_sec(r, 120, 300));
    add("dirb-scan", span_sec(r, 1800, 2400));
    add("webshell-upload", span_sec(r, 20, 40));
    {
        UsecTime d = 0;
        for (std::size_t i = 0; i < a.webshell_cmds.size(); ++i) d += span_sec(r, 10, 20);
        add("webshell-cmd", std::max<UsecTime>(d, 10 * usec_per_sec));
    }
    add("db-dump", span_sec(r, 60, 150));
    add("crack", static_cast<UsecTime>(a.crack_minutes) * usec_per_min);
    add("escalate", span_sec(r, 4, 6));
    // The two sudo invocations follow the su block almost immediately.
    chain.back().gap_after = span_sec(r, 8, 15);
    add("escalated-cmd", span_sec(r, 6, 12));
    add("reverse-shell", span_sec(r, 60, 180));
    chain.back().gap_after = 0;

    const UsecTime dirb_shift = span_sec(r, 30, 120);

    // Worst extra delay the placement rules can add: the directory scan may
    // wait for the next clock hour plus its jitter, cracking may round up to
    // the next minute.
    UsecTime total = 0;
    for (const auto& p : chain) total += p.dur + p.gap_after;
    const UsecTime worst = total + usec_per_hour + dirb_shift + usec_per_min;

    UsecTime t0 = day_start + static_cast<UsecTime>(a.start_min) * usec_per_min +
                  span_sec(r, 0, 59);
    if (t0 + worst > day_end) t0 = day_end - worst;
    if (t0 < day_start)
        throw logbed::ValidationError("attack chain does not fit inside the attack day");

    AttackSchedule sched;
    UsecTime t = t0;
    for (const auto& p : chain) {
        UsecTime s = t;
        if (p.id == "dirb-scan") {
            // Keep the whole scan inside one clock hour so its line count
            // stands out against any single normal hour.
            UsecTime hour = s / usec_per_hour * usec_per_hour;
            if (s + p.dur > hour + usec_per_hour) s = hour + usec_per_hour + dirb_shift;
        } else if (p.id == "crack") {
            s = align_minute(s);
        }
        sched.steps.push_back({p.id, s, s + p.dur});
        t = s + p.dur + p.gap_after;
    }

    // Exfiltration trickles from the start of the window and goes quiet at
    // least a full day before the intrusion chain begins.
    const int exfil_days = std::clamp(a.exfil_days, 1, a.day_offset - 1);
    UsecTime ex_start = inst.start + span_sec(r, 60, 300);
    UsecTime ex_end = inst.start + static_cast<UsecTime>(exfil_days) * usec_per_day -
                      span_sec(r, 3600, 7200);
    if (ex_end <= ex_start)
        throw logbed::ValidationError("exfiltration window collapsed");
    sched.steps.push_back({"dnsteal", ex_start, ex_end});

    return sched;
}

} // namespace logbed::attack
