#include "logbed/label/rules.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "logbed/core/errors.hpp"

namespace logbed::label {

std::vector<std::string> RuleSet::closure(const std::string& label) const {
    std::set<std::string> seen{label};
    std::vector<std::string> frontier{label};
    while (!frontier.empty()) {
        const std::string cur = frontier.back();
        frontier.pop_back();
        auto it = parents.find(cur);
        if (it == parents.end()) continue;
        for (const auto& p : it->second)
            if (seen.insert(p).second) frontier.push_back(p);
    }
    return {seen.begin(), seen.end()};
}

RuleSet RuleSet::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open rule file " + file.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("rule file " + file.string() + ": " + e.what());
    }
    return from_json(doc);
}

RuleSet RuleSet::from_json(const nlohmann::json& doc) {
    RuleSet out;
    if (!doc.is_object() || !doc.contains("rules") || !doc["rules"].is_array())
        throw ValidationError("rule file needs a top-level rules array");

    // the hierarchy maps each group to its members; invert it for lookups
    const nlohmann::json hier = doc.value("hierarchy", nlohmann::json::object());
    for (const auto& [group, members] : hier.items())
        for (const auto& m : members) out.parents[m.get<std::string>()].push_back(group);

    std::set<std::string> ids;
    for (const auto& jr : doc["rules"]) {
        Rule r;
        r.id = jr.at("id").get<std::string>();
        r.file = jr.at("file").get<std::string>();
        r.label = jr.at("label").get<std::string>();
        r.window = jr.at("window").get<std::string>();
        for (const auto& jc : jr.value("all", nlohmann::json::array())) {
            Condition c;
            c.field = jc.at("field").get<std::string>();
            c.op = jc.at("op").get<std::string>();
            c.value = jc.at("value").get<std::string>();
            if (c.op != "equals" && c.op != "prefix" && c.op != "contains" && c.op != "regex")
                throw ValidationError("rule " + r.id + ": unknown op " + c.op);
            r.all.push_back(std::move(c));
        }
        if (!ids.insert(r.id).second) throw ValidationError("duplicate rule id " + r.id);
        out.rules.push_back(std::move(r));
    }
    if (out.rules.empty()) throw ValidationError("rule file defines no rules");
    return out;
}

} // namespace logbed::label
