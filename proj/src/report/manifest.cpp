#include "logbed/report/manifest.hpp"

#include <fstream>
#include <sstream>

#include "logbed/core/errors.hpp"
#include "logbed/core/hashio.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace logbed::report {

void manifest_update(const fs::path& dataset_root, const std::string& stage,
                     const std::string& virtual_time, const json& meta) {
    const fs::path mpath = dataset_root / "manifest.json";

    json doc = json::object();
    if (fs::exists(mpath)) {
        std::ifstream in(mpath);
        try {
            in >> doc;
        } catch (const json::exception& e) {
            throw ValidationError("manifest.json is unreadable: " + std::string(e.what()));
        }
    }
    for (const auto& [k, v] : meta.items()) doc[k] = v;

    json stages = json::array();
    for (const auto& s : doc.value("stages", json::array()))
        if (s.value("name", "") != stage) stages.push_back(s);
    stages.push_back(json{{"name", stage}, {"virtual_time", virtual_time}});
    doc["stages"] = stages;

    json files = json::object();
    for (const auto& e : fs::recursive_directory_iterator(dataset_root)) {
        if (!e.is_regular_file()) continue;
        const std::string rel = fs::relative(e.path(), dataset_root).generic_string();
        if (rel == "manifest.json") continue;
        std::ifstream in(e.path(), std::ios::binary);
        if (!in) throw RuntimeFailure("cannot read " + e.path().string());
        std::ostringstream ss;
        ss << in.rdbuf();
        files[rel] = hashio::sha256_hex(ss.str());
    }
    doc["files"] = files;

    std::ofstream out(mpath, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeFailure("cannot write " + mpath.string());
    out << doc.dump(2) << "\n";
}

} // namespace logbed::report
