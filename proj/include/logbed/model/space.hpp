#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "logbed/core/rng.hpp"

namespace logbed::model {

// Sampleable parameter spaces a template may declare for any knob.
struct IntRange {
    std::int64_t lo = 0, hi = 0;
};
struct RealRange {
    double lo = 0, hi = 0;
};
struct Choice {
    std::vector<nlohmann::json> values;
};
struct TimeWindow {
    // minutes since midnight; start and end each sampled from their range
    int start_lo = 0, start_hi = 0;
    int end_lo = 0, end_hi = 0;
};
struct NamePool {
    std::string pool;
};

using Space = std::variant<IntRange, RealRange, Choice, TimeWindow, NamePool>;

struct PoolTable {
    std::map<std::string, std::vector<std::string>> pools;
};

// Parses one space declaration, e.g. {"int":[3,9]}, {"real":[0.4,2.5]},
// {"choice":[...]}, {"time_window":{"start":["05:00","09:00"],"end":[...]}},
// {"pool":"first"}. Throws ValidationError naming `field` on malformed input.
Space parse_space(const nlohmann::json& j, const std::string& field);

// Bounds and well-formedness. Throws ValidationError naming `field`.
void validate_space(const Space& s, const PoolTable& pools, const std::string& field);

// Draws one value. Int ranges are inclusive. Time windows return
// {"start_min":..,"end_min":..}. Throws ValidationError on malformed spaces
// (unknown pool, inverted bounds, empty choice).
nlohmann::json sample(const Space& s, rng::Stream& r, const PoolTable& pools,
                      const std::string& field);

// Fetches a dotted path ("counts.mail_servers") from a template document and
// parses it as a space. Throws ValidationError when the path is missing.
Space space_at(const nlohmann::json& root, const std::string& path);

} // namespace logbed::model
