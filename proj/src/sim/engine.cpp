#include "logbed/sim/engine.hpp"

#include <stdexcept>
#include <utility>

#include "logbed/core/errors.hpp"

namespace logbed::sim {

void Engine::at(timeutil::UsecTime t, Handler fn) {
    if (t < now_) t = now_; // late insertions fire immediately, never rewind
    queue_.push(Item{t, next_seq_++, std::move(fn)});
}

void Engine::after(std::int64_t delay_usec, Handler fn) {
    if (delay_usec < 0) delay_usec = 0;
    at(now_ + delay_usec, std::move(fn));
}

void Engine::run_until(timeutil::UsecTime end) {
    while (!queue_.empty() && queue_.top().at <= end) {
        Item item = queue_.top();
        queue_.pop();
        now_ = item.at;
        item.fn();
    }
    if (now_ < end) now_ = end;
}

std::size_t weighted_index(rng::Stream& rng, const std::vector<double>& weights) {
    if (weights.empty()) throw ValidationError("weighted draw over empty weight list");
    double total = 0;
    for (double w : weights) {
        if (w < 0) throw ValidationError("negative weight in draw");
        total += w;
    }
    if (total <= 0) throw ValidationError("weights sum to zero");
    double x = rng.unit() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        x -= weights[i];
        if (x < 0) return i;
    }
    return weights.size() - 1;
}

} // namespace logbed::sim
