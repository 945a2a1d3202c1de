#include "logbed/sim/run.hpp"

#include "logbed/attack/execute.hpp"
#include "logbed/attack/schedule.hpp"
#include "logbed/behavior/runtime.hpp"
#include "logbed/sim/world.hpp"

namespace logbed::sim {

std::size_t run(const model::ScenarioInstance& inst, logsynth::SinkSet& sinks) {
    sinks.open(inst);
    World world(inst, sinks);

    behavior::BackgroundRuntime background(world);
    background.install();
    behavior::UserRuntime users(world);
    users.install();

    if (inst.attack.enabled) {
        auto r = rng::derive(inst.seed, "attack/plan");
        attack::AttackRuntime attack(world, attack::plan_attack(inst, r));
        attack.install();
        world.engine.run_until(inst.end - 1);
    } else {
        world.engine.run_until(inst.end - 1);
    }

    sinks.flush(inst);
    return sinks.line_count();
}

} // namespace logbed::sim
