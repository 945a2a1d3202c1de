#pragma once

#include <string>
#include <vector>

namespace logbed::behavior {

// Idle classes between transitions, resolved against per-user ranges.
enum class Idle { Tiny, Small, Medium, Large };

struct EdgeDef {
    const char* from;
    const char* to;
    const char* action; // "" = silent transition
    Idle idle;          // dwell time before the edge fires
};

struct MachineDef {
    const char* name;  // namespace prefix for states
    const char* entry; // state entered from the hub
    const char* exit;  // state that returns control to the hub
    std::vector<EdgeDef> edges;
};

// The per-user activity machines. Users get a subset depending on role
// flags; the hub ("desk") switches between them during the workday.
const std::vector<MachineDef>& machine_defs();

// Hub switch-edge targets in declaration order (machine names).
std::vector<std::string> machine_names();

// Catalog of every weight the model samples per user: in-machine edges as
// "machine.from->to" plus hub switches as "desk-><machine>". Order is fixed.
std::vector<std::string> weight_keys();

} // namespace logbed::behavior
