#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "logbed/core/time.hpp"
#include "logbed/model/model.hpp"

namespace logbed::label {

// Everything the rules can reference: scalar facts from the instance
// description and the attacker's own execution log, plus the start/end
// window each attack step reported.
class FactStore {
public:
    void put(const std::string& key, std::string value);
    void put_window(const std::string& step, timeutil::UsecTime start, timeutil::UsecTime end);

    const std::string* find(const std::string& key) const;
    std::optional<std::pair<timeutil::UsecTime, timeutil::UsecTime>>
    window(const std::string& step) const;

    // replaces every {key}; unknown keys raise ValidationError
    std::string resolve(const std::string& text) const;

    const std::map<std::string, std::string>& all() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
    std::map<std::string, std::pair<timeutil::UsecTime, timeutil::UsecTime>> windows_;
};

// Builds the store for a dataset: instance facts keyed attack.*, host.*,
// org_domain, window.*; attack step records from the attacker trace keyed
// step.<id>.*. Works on published datasets too since both inputs ship.
FactStore collect_facts(const std::filesystem::path& dataset_root,
                        const model::ScenarioInstance& inst);

} // namespace logbed::label
