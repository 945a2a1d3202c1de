#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

namespace logbed::report {

// Rewrites manifest.json in the dataset root: appends (or replaces) the
// named stage entry and refreshes the content hash of every file in the
// tree. Stage timestamps use the dataset's own clock, not wall time, so a
// rerun of the same instance produces an identical manifest.
void manifest_update(const std::filesystem::path& dataset_root, const std::string& stage,
                     const std::string& virtual_time, const nlohmann::json& meta);

} // namespace logbed::report
