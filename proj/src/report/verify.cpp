#include "logbed/report/verify.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "logbed/core/errors.hpp"
#include "logbed/core/hashio.hpp"
#include "logbed/core/rng.hpp"
#include "logbed/core/text.hpp"
#include "logbed/core/time.hpp"
#include "logbed/label/engine.hpp"
#include "logbed/logsynth/format.hpp"
#include "logbed/logsynth/sinks.hpp"
#include "logbed/model/model.hpp"

namespace fs = std::filesystem;
namespace tu = logbed::timeutil;
using nlohmann::json;

namespace logbed::report {

bool VerifyReport::ok() const {
    for (const auto& it : items)
        if (it.status == "fail") return false;
    return true;
}

std::string VerifyReport::render() const {
    std::ostringstream s;
    for (const auto& it : items) {
        std::string tag = it.status == "pass" ? "PASS" : it.status == "skip" ? "SKIP" : "FAIL";
        s << "[" << tag << "] " << it.name;
        if (!it.detail.empty()) s << " (" << it.detail << ")";
        s << "\n";
    }
    s << (ok() ? "verification passed\n" : "verification FAILED\n");
    return s.str();
}

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw RuntimeFailure("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void check_files(const model::ScenarioInstance& inst, const fs::path& root, VerifyReport& rep) {
    const int year = tu::to_civil(inst.start).year;
    std::size_t files = 0, lines = 0;
    std::string bad_parse, bad_order;

    for (const auto& h : inst.hosts) {
        for (const auto& f : logsynth::files_for_host(h)) {
            const fs::path p = root / "gather" / h.hostname / "logs" / f.rel;
            const auto content = label::read_log_stream(p);
            ++files;
            tu::UsecTime prev = 0;
            for (std::size_t i = 0; i < content.size(); ++i) {
                ++lines;
                const auto ev = logsynth::parse_line(f.format, content[i], year);
                if (!ev.ok) {
                    if (bad_parse.empty())
                        bad_parse = h.hostname + "/logs/" + f.rel + ":" + std::to_string(i + 1);
                    continue;
                }
                if (ev.ts < prev && bad_order.empty())
                    bad_order = h.hostname + "/logs/" + f.rel + ":" + std::to_string(i + 1);
                prev = ev.ts;
            }
        }
    }

    const std::string scope = std::to_string(lines) + " lines in " + std::to_string(files) +
                              " files";
    rep.items.push_back({"every line parses",
                         bad_parse.empty() ? "pass" : "fail",
                         bad_parse.empty() ? scope : "first failure at " + bad_parse});
    rep.items.push_back({"timestamps never step backwards",
                         bad_order.empty() ? "pass" : "fail",
                         bad_order.empty() ? scope : "first violation at " + bad_order});
}

void check_exfil(const model::ScenarioInstance& inst, const fs::path& root, VerifyReport& rep) {
    if (!inst.attack.enabled) {
        rep.items.push_back({"exfiltrated bytes reconstruct", "skip", "no attack in this run"});
        rep.items.push_back({"exfiltration stops a day early", "skip", "no attack in this run"});
        return;
    }
    const auto& at = inst.attack;
    const int year = tu::to_civil(inst.start).year;
    const auto* fw = inst.host_by_role("firewall");

    std::vector<std::string> names;
    for (const auto& raw :
         label::read_log_stream(root / "gather" / fw->hostname / "logs" / "dnsmasq.log")) {
        const auto ev = logsynth::parse_line(logsynth::Format::DnsQuery, raw, year);
        if (!ev.ok || ev.get("op") != "query") continue;
        const std::string& name = ev.get("name");
        if (text::ends_with(name, "." + at.exfil_domain))
            names.push_back(name.substr(0, name.size() - at.exfil_domain.size() - 1));
    }

    std::string err;
    std::map<std::string, std::string> rebuilt;
    std::size_t i = 0;
    while (err.empty() && i < names.size()) {
        const auto meta = text::split(names[i], '.');
        const auto fname = meta.size() == 2 ? text::base64_decode(meta[0]) : std::nullopt;
        if (!fname) {
            err = "malformed metadata query " + names[i];
            break;
        }
        std::size_t chunks = 0;
        try {
            chunks = std::stoull(meta[1]);
        } catch (const std::exception&) {
            err = "bad chunk count in " + names[i];
            break;
        }
        ++i;
        std::string b64;
        std::size_t got = 0;
        while (got < chunks && i < names.size()) {
            for (const auto& label : text::split(names[i], '.')) {
                b64 += label;
                ++got;
            }
            ++i;
        }
        if (got < chunks) {
            err = *fname + ": stream ends early";
            break;
        }
        const auto bytes = text::base64_decode(b64);
        if (!bytes) {
            err = *fname + ": payload is not base64";
            break;
        }
        try {
            rebuilt[*fname] = at.exfil_compress ? hashio::zlib_decompress(*bytes) : *bytes;
        } catch (const std::exception& e) {
            err = *fname + ": " + e.what();
            break;
        }
    }

    if (err.empty() && rebuilt.size() != at.exfil_files.size())
        err = "expected " + std::to_string(at.exfil_files.size()) + " files, decoded " +
              std::to_string(rebuilt.size());
    if (err.empty()) {
        for (const auto& f : inst.files) {
            if (!rebuilt.count(f.name)) continue;
            auto r = rng::derive(inst.seed, "file/" + f.name);
            std::string expect(static_cast<std::size_t>(f.size), '\0');
            for (auto& ch : expect) ch = static_cast<char>(r.uniform_int(0, 255));
            if (rebuilt[f.name] != expect) {
                err = f.name + ": decoded bytes differ";
                break;
            }
        }
    }
    rep.items.push_back({"exfiltrated bytes reconstruct", err.empty() ? "pass" : "fail",
                         err.empty() ? std::to_string(rebuilt.size()) + " files" : err});

    // quiet period before the interactive intrusion
    const auto* attacker = inst.host_by_role("attacker");
    tu::UsecTime exfil_end = 0, chain_start = 0;
    for (const auto& raw : label::read_log_stream(root / "gather" / attacker->hostname / "logs" /
                                                  "statemachine.log")) {
        json j;
        try {
            j = json::parse(raw);
        } catch (const json::exception&) {
            continue;
        }
        if (!j.contains("step")) continue;
        if (j["step"] == "dnsteal")
            exfil_end = tu::parse_rfc3339(j["end"].get<std::string>()).value_or(0);
        if (j["step"] == "vpn-connect")
            chain_start = tu::parse_rfc3339(j["start"].get<std::string>()).value_or(0);
    }
    std::string qerr;
    if (exfil_end == 0 || chain_start == 0)
        qerr = "attack trace lacks step records";
    else if (chain_start - exfil_end < tu::usec_per_day)
        qerr = "gap is only " + std::to_string((chain_start - exfil_end) / tu::usec_per_sec) +
               " s";
    rep.items.push_back(
        {"exfiltration stops a day early", qerr.empty() ? "pass" : "fail", qerr});
}

void check_labels(const model::ScenarioInstance& inst, const fs::path& root, VerifyReport& rep) {
    const fs::path prov_path = root / "provenance.ndjson";
    if (!fs::exists(prov_path)) {
        rep.items.push_back(
            {"labels match provenance", "skip", "published dataset, provenance stripped"});
        return;
    }
    if (!fs::exists(root / "labels")) {
        rep.items.push_back({"labels match provenance", "skip", "labels/ not generated yet"});
        return;
    }

    std::set<std::string> labeled;
    for (const auto& h : inst.hosts)
        for (const auto& f : logsynth::files_for_host(h))
            if (f.labeled) labeled.insert(h.hostname + "/logs/" + f.rel);

    // per (file, line): the labels the engine wrote
    std::map<std::pair<std::string, std::size_t>, std::set<std::string>> got;
    for (const auto& rel : labeled) {
        const fs::path p = root / "labels" / rel;
        if (!fs::exists(p)) continue;
        std::ifstream in(p);
        std::string line;
        while (std::getline(in, line)) {
            json j;
            try {
                j = json::parse(line);
            } catch (const json::exception&) {
                continue;
            }
            auto& set = got[{rel, j["line"].get<std::size_t>()}];
            for (const auto& l : j["labels"]) set.insert(l.get<std::string>());
        }
    }

    std::size_t attack_lines = 0, misses = 0, false_hits = 0;
    std::set<std::pair<std::string, std::size_t>> tagged;
    std::ifstream prov(prov_path);
    std::string line;
    while (std::getline(prov, line)) {
        const auto j = json::parse(line);
        std::string file = j["file"].get<std::string>();
        if (file.rfind("gather/", 0) != 0) continue;
        file = file.substr(7);
        if (!labeled.count(file)) continue;
        const auto key = std::make_pair(file, j["line"].get<std::size_t>());
        const std::string tag = j["tag"].get<std::string>();
        if (tag == "normal") {
            if (got.count(key)) ++false_hits;
            continue;
        }
        ++attack_lines;
        tagged.insert(key);
        const auto it = got.find(key);
        if (it == got.end() || !it->second.count(tag)) ++misses;
    }
    for (const auto& [key, labels] : got)
        if (!tagged.count(key)) ++false_hits;

    const double recall = attack_lines == 0
                              ? 1.0
                              : 1.0 - static_cast<double>(misses) /
                                          static_cast<double>(attack_lines);
    char detail[128];
    std::snprintf(detail, sizeof detail,
                  "%zu attack lines, %zu missed, %zu false; recall %.4f", attack_lines, misses,
                  false_hits, recall);
    rep.items.push_back({"labels match provenance",
                         misses == 0 && false_hits == 0 ? "pass" : "fail", detail});
}

void check_manifest(const fs::path& root, VerifyReport& rep) {
    const fs::path mpath = root / "manifest.json";
    if (!fs::exists(mpath)) {
        rep.items.push_back({"manifest hashes hold", "skip", "no manifest.json"});
        return;
    }
    json doc;
    try {
        doc = json::parse(slurp(mpath));
    } catch (const json::exception& e) {
        rep.items.push_back({"manifest hashes hold", "fail", e.what()});
        return;
    }
    std::size_t checked = 0;
    std::string err;
    const json recorded = doc.value("files", json::object());
    for (const auto& [rel, digest] : recorded.items()) {
        const fs::path p = root / rel;
        if (!fs::exists(p)) {
            err = rel + " is recorded but missing";
            break;
        }
        if (hashio::sha256_hex(slurp(p)) != digest.get<std::string>()) {
            err = rel + " differs from its recorded hash";
            break;
        }
        ++checked;
    }
    rep.items.push_back({"manifest hashes hold", err.empty() ? "pass" : "fail",
                         err.empty() ? std::to_string(checked) + " files" : err});
}

} // namespace

VerifyReport verify_dataset(const fs::path& dataset_root) {
    const auto inst = model::load_instance(dataset_root / "config" / "instance.txt");
    VerifyReport rep;
    check_files(inst, dataset_root, rep);
    check_exfil(inst, dataset_root, rep);
    check_labels(inst, dataset_root, rep);
    check_manifest(dataset_root, rep);
    return rep;
}

} // namespace logbed::report
