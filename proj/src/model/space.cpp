#include "logbed/model/space.hpp"

#include "logbed/core/errors.hpp"
#include "logbed/core/text.hpp"
#include "logbed/core/time.hpp"

namespace logbed::model {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
    throw ValidationError("parameter space '" + field + "': " + why);
}

int clock_minutes(const json& j, const std::string& field) {
    if (!j.is_string()) bad(field, "time bounds must be HH:MM strings");
    auto m = timeutil::parse_clock_minutes(j.get<std::string>());
    if (!m) bad(field, "invalid clock value '" + j.get<std::string>() + "'");
    return *m;
}

} // namespace

Space parse_space(const json& j, const std::string& field) {
    if (!j.is_object() || j.size() != 1) bad(field, "expected a single-key space object");
    const auto it = j.begin();
    const std::string kind = it.key();
    const json& body = it.value();
    if (kind == "int") {
        if (!body.is_array() || body.size() != 2 || !body[0].is_number_integer() ||
            !body[1].is_number_integer())
            bad(field, "\"int\" takes [lo, hi] integers");
        return IntRange{body[0].get<std::int64_t>(), body[1].get<std::int64_t>()};
    }
    if (kind == "real") {
        if (!body.is_array() || body.size() != 2 || !body[0].is_number() || !body[1].is_number())
            bad(field, "\"real\" takes [lo, hi] numbers");
        return RealRange{body[0].get<double>(), body[1].get<double>()};
    }
    if (kind == "choice") {
        if (!body.is_array() || body.empty()) bad(field, "\"choice\" takes a non-empty array");
        return Choice{std::vector<json>(body.begin(), body.end())};
    }
    if (kind == "time_window") {
        if (!body.is_object() || !body.contains("start") || !body.contains("end") ||
            !body["start"].is_array() || body["start"].size() != 2 || !body["end"].is_array() ||
            body["end"].size() != 2)
            bad(field, "\"time_window\" takes {start:[..,..], end:[..,..]}");
        TimeWindow w;
        w.start_lo = clock_minutes(body["start"][0], field);
        w.start_hi = clock_minutes(body["start"][1], field);
        w.end_lo = clock_minutes(body["end"][0], field);
        w.end_hi = clock_minutes(body["end"][1], field);
        return w;
    }
    if (kind == "pool") {
        if (!body.is_string() || body.get<std::string>().empty())
            bad(field, "\"pool\" takes a pool id");
        return NamePool{body.get<std::string>()};
    }
    bad(field, "unknown space kind '" + kind + "'");
}

void validate_space(const Space& s, const PoolTable& pools, const std::string& field) {
    if (const auto* r = std::get_if<IntRange>(&s)) {
        if (r->lo > r->hi) bad(field, "int range has lo > hi");
    } else if (const auto* r = std::get_if<RealRange>(&s)) {
        if (!(r->lo <= r->hi)) bad(field, "real range has lo > hi");
    } else if (const auto* c = std::get_if<Choice>(&s)) {
        if (c->values.empty()) bad(field, "empty choice");
    } else if (const auto* w = std::get_if<TimeWindow>(&s)) {
        if (w->start_lo > w->start_hi || w->end_lo > w->end_hi)
            bad(field, "time window bounds inverted");
        // the sampled end must always land after the sampled start
        if (w->end_lo <= w->start_hi) bad(field, "end range must lie above the start range");
    } else if (const auto* p = std::get_if<NamePool>(&s)) {
        const auto it = pools.pools.find(p->pool);
        if (it == pools.pools.end()) bad(field, "unknown name pool '" + p->pool + "'");
        if (it->second.empty()) bad(field, "name pool '" + p->pool + "' is empty");
    }
}

json sample(const Space& s, rng::Stream& r, const PoolTable& pools, const std::string& field) {
    validate_space(s, pools, field);
    if (const auto* ir = std::get_if<IntRange>(&s)) return r.uniform_int(ir->lo, ir->hi);
    if (const auto* rr = std::get_if<RealRange>(&s)) return r.uniform_real(rr->lo, rr->hi);
    if (const auto* c = std::get_if<Choice>(&s)) return c->values[r.index(c->values.size())];
    if (const auto* w = std::get_if<TimeWindow>(&s)) {
        json out;
        out["start_min"] = r.uniform_int(w->start_lo, w->start_hi);
        out["end_min"] = r.uniform_int(w->end_lo, w->end_hi);
        return out;
    }
    const auto& pool = pools.pools.at(std::get<NamePool>(s).pool);
    return pool[r.index(pool.size())];
}

Space space_at(const json& root, const std::string& path) {
    const json* node = &root;
    for (const auto& part : text::split(path, '.')) {
        if (!node->is_object() || !node->contains(part))
            throw ValidationError("template is missing '" + path + "'");
        node = &(*node)[part];
    }
    return parse_space(*node, path);
}

} // namespace logbed::model
