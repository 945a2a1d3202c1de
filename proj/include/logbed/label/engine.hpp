#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "logbed/label/facts.hpp"
#include "logbed/label/rules.hpp"
#include "logbed/logsynth/format.hpp"
#include "logbed/model/model.hpp"

namespace logbed::label {

// labels attached to one line of a log file
struct LineLabels {
    std::size_t line = 0; // 1-based
    std::vector<std::string> labels;
    std::vector<std::string> rules;
};

struct FileResult {
    std::string file; // "<host>/logs/<rel>"
    std::size_t lines = 0;
    std::vector<LineLabels> hits;
};

struct LabelReport {
    std::vector<FileResult> files;
    std::map<std::string, std::size_t> rule_counts; // every rule id appears
    std::size_t labeled_lines = 0;

    bool every_rule_matched() const;
    std::string render() const;
};

// The per-line matching kernel for one file, exposed so the parallel and
// serial paths can be compared directly. Lines outside [trim_start,
// trim_end] never match.
std::vector<LineLabels> apply_rules(const std::vector<std::string>& lines,
                                    logsynth::Format format, int year,
                                    const std::vector<const Rule*>& rules,
                                    const RuleSet& ruleset, const FactStore& facts,
                                    timeutil::UsecTime trim_start, timeutil::UsecTime trim_end,
                                    bool parallel);

// Labels every marked file of the dataset and writes labels/<host>/logs/...
// plus labeling-report.txt in the dataset root. Reruns overwrite cleanly.
LabelReport label_dataset(const std::filesystem::path& dataset_root, const RuleSet& ruleset,
                          bool parallel = true);

// Reads a file that may have rotated siblings (<f>.1, <f>.2.gz), oldest
// first, so line numbers match the logical stream.
std::vector<std::string> read_log_stream(const std::filesystem::path& file);

} // namespace logbed::label
