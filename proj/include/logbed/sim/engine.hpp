#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "logbed/core/rng.hpp"
#include "logbed/core/time.hpp"

namespace logbed::sim {

// Discrete-event kernel on a virtual clock. Events fire in (time, insertion
// order); ties never reorder, so a run is a pure function of its inputs.
class Engine {
public:
    using Handler = std::function<void()>;

    timeutil::UsecTime now() const { return now_; }

    void at(timeutil::UsecTime t, Handler fn);
    void after(std::int64_t delay_usec, Handler fn);

    // Pops events until the queue is empty or the next event is past `end`.
    // Events scheduled at or before `end` during the run are executed too.
    void run_until(timeutil::UsecTime end);

    std::size_t pending() const { return queue_.size(); }

private:
    struct Item {
        timeutil::UsecTime at;
        std::uint64_t seq;
        Handler fn;
    };
    struct Later {
        bool operator()(const Item& a, const Item& b) const {
            if (a.at != b.at) return a.at > b.at;
            return a.seq > b.seq;
        }
    };

    timeutil::UsecTime now_ = 0;
    std::uint64_t next_seq_ = 0;
    std::priority_queue<Item, std::vector<Item>, Later> queue_;
};

// Index draw proportional to `weights` (need not be normalized).
std::size_t weighted_index(rng::Stream& rng, const std::vector<double>& weights);

} // namespace logbed::sim
