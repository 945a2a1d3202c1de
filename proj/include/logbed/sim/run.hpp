#pragma once

#include "logbed/logsynth/sinks.hpp"
#include "logbed/model/model.hpp"

namespace logbed::sim {

// Drives one full scenario: background services, the user population, and
// the attack (when enabled) all run on a single virtual clock, then the
// sinks flush the dataset tree. Returns the number of lines written.
std::size_t run(const model::ScenarioInstance& inst, logsynth::SinkSet& sinks);

} // namespace logbed::sim
