#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "logbed/core/time.hpp"
#include "logbed/logsynth/format.hpp"
#include "logbed/model/model.hpp"

namespace logbed::logsynth {

struct LayoutFile {
    std::string rel; // path under gather/<host>/logs/
    Format format;
    bool labeled = false;
    bool rotated = false; // written as <rel>, <rel>.1, <rel>.2.gz split by day
};

// Which log files a host of this role and zone produces in the dataset.
std::vector<LayoutFile> files_for_host(const model::Host& host);

// Collects every emitted line in memory, enforces per-file timestamp order,
// then writes the gather tree, applying day-based rotation where configured,
// plus the per-line provenance side channel used as the labeling oracle.
class SinkSet {
public:
    SinkSet(std::filesystem::path dataset_root, bool publish);

    // Registers every expected file for the instance so empty files still
    // appear in the output tree.
    void open(const model::ScenarioInstance& inst);

    void write(const std::string& host, const std::string& rel, timeutil::UsecTime ts,
               std::string line, const std::string& tag);

    // Writes all buffered content. On failure leaves an INCOMPLETE marker in
    // the dataset root and rethrows.
    void flush(const model::ScenarioInstance& inst);

    std::size_t line_count() const;
    const std::filesystem::path& root() const { return root_; }

private:
    struct Line {
        timeutil::UsecTime ts;
        std::string text;
        std::string tag;
    };
    struct FileBuf {
        std::string host;
        std::string rel;
        bool rotated = false;
        timeutil::UsecTime last_ts = INT64_MIN;
        std::vector<Line> lines;
    };

    std::filesystem::path root_;
    bool publish_;
    std::map<std::string, FileBuf> files_; // key host + "\n" + rel

    void flush_inner(const model::ScenarioInstance& inst);
};

} // namespace logbed::logsynth
