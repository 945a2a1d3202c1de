#pragma once

#include <filesystem>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace logbed::label {

// One field test inside a rule. Values may reference facts with
// {placeholder} syntax; they are resolved against the fact store before the
// comparison. The special field "_raw" tests the whole line.
struct Condition {
    std::string field;
    std::string op; // equals | prefix | contains | regex
    std::string value;
};

// A rule label applies to a line when the line sits inside the window of the
// named attack step (with slack) and every condition holds.
struct Rule {
    std::string id;
    std::string file; // dataset path relative to gather/, e.g. "firewall/logs/dnsmasq.log"
    std::string label;
    std::string window; // attack step id supplying [start, end]
    std::vector<Condition> all;
};

struct RuleSet {
    std::vector<Rule> rules;
    // child -> direct parents; closure() walks it upward
    std::map<std::string, std::vector<std::string>> parents;

    std::vector<std::string> closure(const std::string& label) const;

    static RuleSet load(const std::filesystem::path& file);
    static RuleSet from_json(const nlohmann::json& doc);
};

} // namespace logbed::label
