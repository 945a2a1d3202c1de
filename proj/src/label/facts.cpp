#include "logbed/label/facts.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "logbed/core/errors.hpp"
#include "logbed/logsynth/format.hpp"

namespace logbed::label {

namespace {

std::string scalar_text(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number_float()) return std::to_string(v.get<double>());
    return v.dump();
}

} // namespace

void FactStore::put(const std::string& key, std::string value) { kv_[key] = std::move(value); }

void FactStore::put_window(const std::string& step, timeutil::UsecTime start,
                           timeutil::UsecTime end) {
    windows_[step] = {start, end};
}

const std::string* FactStore::find(const std::string& key) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? nullptr : &it->second;
}

std::optional<std::pair<timeutil::UsecTime, timeutil::UsecTime>>
FactStore::window(const std::string& step) const {
    auto it = windows_.find(step);
    if (it == windows_.end()) return std::nullopt;
    return it->second;
}

std::string FactStore::resolve(const std::string& text) const {
    std::string out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '{') {
            out.push_back(text[i++]);
            continue;
        }
        const auto close = text.find('}', i);
        if (close == std::string::npos) throw ValidationError("unclosed placeholder in: " + text);
        const std::string key = text.substr(i + 1, close - i - 1);
        const std::string* v = find(key);
        if (!v) throw ValidationError("unknown fact: " + key);
        out += *v;
        i = close + 1;
    }
    return out;
}

FactStore collect_facts(const std::filesystem::path& dataset_root,
                        const model::ScenarioInstance& inst) {
    FactStore out;

    out.put("org_domain", inst.org_domain);
    out.put("window.start", std::to_string(inst.start));
    out.put("window.end", std::to_string(inst.end));
    for (const auto& h : inst.hosts) {
        out.put("host." + h.hostname + ".addr", h.addr);
        if (!h.fqdn.empty()) out.put("host." + h.hostname + ".fqdn", h.fqdn);
    }
    const auto j = inst.to_json();
    if (j.contains("attack"))
        for (const auto& [k, v] : j["attack"].items())
            if (!v.is_array() && !v.is_object()) out.put("attack." + k, scalar_text(v));

    // the attacker's own log supplies the step windows and tool facts
    const model::Host* attacker = inst.host_by_role("attacker");
    if (attacker) {
        const auto trace =
            dataset_root / "gather" / attacker->hostname / "logs" / "statemachine.log";
        std::ifstream in(trace);
        std::string line;
        while (in && std::getline(in, line)) {
            nlohmann::json rec;
            try {
                rec = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception&) {
                continue;
            }
            if (!rec.contains("step") || !rec.contains("start") || !rec.contains("end")) continue;
            const std::string step = rec["step"].get<std::string>();
            const auto start = timeutil::parse_rfc3339(rec["start"].get<std::string>());
            const auto end = timeutil::parse_rfc3339(rec["end"].get<std::string>());
            if (!start || !end) continue;
            out.put_window(step, *start, *end);
            out.put("step." + step + ".start", std::to_string(*start));
            out.put("step." + step + ".end", std::to_string(*end));
            if (rec.contains("facts") && rec["facts"].is_object())
                for (const auto& [k, v] : rec["facts"].items())
                    if (!v.is_array() && !v.is_object())
                        out.put("step." + step + "." + k, scalar_text(v));
        }
    }
    return out;
}

} // namespace logbed::label
