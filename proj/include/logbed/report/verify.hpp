#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace logbed::report {

struct VerifyItem {
    std::string name;
    std::string status; // pass | fail | skip
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyItem> items;

    bool ok() const;
    std::string render() const;
};

// Replays every machine-checkable invariant of a finished dataset:
// parseability and timestamp order of all known files, exfiltration
// round-trip and quiet period, label agreement with provenance, and the
// recorded manifest hashes. Checks whose inputs were stripped (published
// datasets) are reported as skipped.
VerifyReport verify_dataset(const std::filesystem::path& dataset_root);

} // namespace logbed::report
