#pragma once

#include <string>
#include <vector>

#include "logbed/core/rng.hpp"
#include "logbed/core/time.hpp"
#include "logbed/model/model.hpp"

namespace logbed::attack {

struct StepPlan {
    std::string id;
    timeutil::UsecTime start = 0;
    timeutil::UsecTime end = 0;
};

// The fifteen steps in execution order. The exfiltration trickle runs first
// on the calendar; everything else forms one chain on the attack day.
struct AttackSchedule {
    std::vector<StepPlan> steps;

    const StepPlan& step(const std::string& id) const;
};

// Chain step ids in their mandatory order, exfiltration last.
const std::vector<std::string>& step_ids();

// Lays the steps out on the clock: sampled durations, pauses between steps,
// the directory scan pinned inside one clock hour, cracking aligned to the
// one-minute metrics grid, and the exfiltration window across the days
// before the attack. Throws ValidationError when the chain cannot fit.
AttackSchedule plan_attack(const model::ScenarioInstance& inst, rng::Stream& r);

} // namespace logbed::attack
