// End-to-end checks for the whole pipeline, one verdict line each. Every
// threshold is written out here rather than shared with the code under test
// so a regression cannot silently move the goalposts.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "format_samplers.hpp"
#include "logbed/attack/schedule.hpp"
#include "logbed/core/errors.hpp"
#include "logbed/core/hashio.hpp"
#include "logbed/core/rng.hpp"
#include "logbed/core/text.hpp"
#include "logbed/core/time.hpp"
#include "logbed/label/engine.hpp"
#include "logbed/label/rules.hpp"
#include "logbed/logsynth/format.hpp"
#include "logbed/logsynth/sinks.hpp"
#include "logbed/model/model.hpp"
#include "logbed/report/stats.hpp"
#include "logbed/report/verify.hpp"
#include "logbed/sim/run.hpp"

namespace fs = std::filesystem;
namespace tu = logbed::timeutil;
using nlohmann::json;
using namespace logbed;

namespace {

// pinned acceptance thresholds
constexpr std::uint64_t kSeeds[] = {1, 2, 3, 4, 5, 6, 7, 8};
constexpr double kRuntimeBudgetSec = 60.0;
constexpr double kDnsBandLo = 200.0;
constexpr double kDnsBandHi = 450.0;
constexpr int kDayStartMin = 5 * 60;
constexpr int kDayEndMin = 22 * 60;
constexpr std::size_t kSpikeLines = 5000;
constexpr double kSpikeRatio = 5.0;
constexpr int kTuplesPerFormat = 10000;
constexpr int kPlanSeeds = 100;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Dataset {
    model::ScenarioInstance inst;
    fs::path root;
};

std::vector<Dataset> g_sets; // one per seed in kSeeds, built in main

fs::path work_root() { return fs::temp_directory_path() / "logbed-acceptance"; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw RuntimeFailure("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> read_lines(const fs::path& p) {
    std::vector<std::string> out;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::map<std::string, std::string> tree_digest(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file())
            out[fs::relative(e.path(), root).generic_string()] =
                hashio::sha256_hex(slurp(e.path()));
    return out;
}

// step windows as the attacker's own trace reported them
std::map<std::string, std::pair<tu::UsecTime, tu::UsecTime>> step_windows(const Dataset& d) {
    std::map<std::string, std::pair<tu::UsecTime, tu::UsecTime>> out;
    const auto* attacker = d.inst.host_by_role("attacker");
    for (const auto& raw :
         read_lines(d.root / "gather" / attacker->hostname / "logs" / "statemachine.log")) {
        json j;
        try {
            j = json::parse(raw);
        } catch (const json::exception&) {
            continue;
        }
        if (!j.contains("step")) continue;
        const auto s = tu::parse_rfc3339(j["start"].get<std::string>());
        const auto e = tu::parse_rfc3339(j["end"].get<std::string>());
        if (s && e) out[j["step"].get<std::string>()] = {*s, *e};
    }
    return out;
}

Outcome c1_determinism() {
    auto doc = json::parse(slurp(LOGBED_DATA_DIR "/default_template.json"));
    doc["window"]["days"]["int"] = {5, 5};
    doc["counts"]["internal_employees"]["int"] = {9, 9};
    doc["counts"]["remote_employees"]["int"] = {4, 4};
    doc["counts"]["external_users"]["int"] = {2, 2};
    const auto tpl = model::ScenarioTemplate::from_json(doc, LOGBED_DATA_DIR);
    const auto rules = label::RuleSet::load(LOGBED_DATA_DIR "/default_rules.json");

    const fs::path r1 = work_root() / "det-1";
    const fs::path r2 = work_root() / "det-2";

    const auto began = std::chrono::steady_clock::now();
    const auto inst = model::instantiate(tpl, 424242);
    if (inst.users.size() != 15 || inst.days() != 5)
        return {false, "pinned template yielded " + std::to_string(inst.users.size()) +
                           " users over " + std::to_string(inst.days()) + " days"};
    {
        logsynth::SinkSet sinks(r1, false);
        sim::run(inst, sinks);
        label::label_dataset(r1, rules);
    }
    const double took =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - began).count();

    {
        const auto again = model::instantiate(tpl, 424242);
        logsynth::SinkSet sinks(r2, false);
        sim::run(again, sinks);
        label::label_dataset(r2, rules);
    }

    const auto d1 = tree_digest(r1);
    const auto d2 = tree_digest(r2);
    char buf[160];
    if (d1 != d2 || d1.empty()) {
        std::size_t diff = 0;
        for (const auto& [f, h] : d1)
            if (!d2.count(f) || d2.at(f) != h) ++diff;
        std::snprintf(buf, sizeof buf, "%zu of %zu files differ between identical runs", diff,
                      d1.size());
        return {false, buf};
    }
    if (took >= kRuntimeBudgetSec) {
        std::snprintf(buf, sizeof buf, "pipeline took %.1f s, budget is %.0f s", took,
                      kRuntimeBudgetSec);
        return {false, buf};
    }
    std::snprintf(buf, sizeof buf,
                  "5 days, 15 users: %zu identical files, pipeline %.1f s (budget %.0f s)",
                  d1.size(), took, kRuntimeBudgetSec);
    return {true, buf};
}

Outcome c2_label_oracle() {
    const auto rules = label::RuleSet::load(LOGBED_DATA_DIR "/default_rules.json");
    std::size_t attack_total = 0;
    for (const auto& d : g_sets) {
        const auto rep = label::label_dataset(d.root, rules);
        if (!rep.every_rule_matched())
            return {false, "seed " + std::to_string(d.inst.seed) + ": a rule matched nothing"};

        std::set<std::string> labeled;
        for (const auto& h : d.inst.hosts)
            for (const auto& f : logsynth::files_for_host(h))
                if (f.labeled) labeled.insert(h.hostname + "/logs/" + f.rel);

        std::map<std::pair<std::string, std::size_t>, std::set<std::string>> got;
        for (const auto& rel : labeled) {
            const fs::path p = d.root / "labels" / rel;
            if (!fs::exists(p)) continue;
            for (const auto& raw : read_lines(p)) {
                const auto j = json::parse(raw);
                auto& set = got[{rel, j["line"].get<std::size_t>()}];
                for (const auto& l : j["labels"]) set.insert(l.get<std::string>());
            }
        }

        std::size_t attack_lines = 0, misses = 0, false_hits = 0;
        std::set<std::pair<std::string, std::size_t>> tagged;
        for (const auto& raw : read_lines(d.root / "provenance.ndjson")) {
            const auto j = json::parse(raw);
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

        if (misses || false_hits || attack_lines == 0)
            return {false, "seed " + std::to_string(d.inst.seed) + ": " +
                               std::to_string(misses) + " missed, " +
                               std::to_string(false_hits) + " false of " +
                               std::to_string(attack_lines)};
        attack_total += attack_lines;
    }
    return {true, std::to_string(std::size(kSeeds)) +
                      " seeds, recall and precision 1.0 over " + std::to_string(attack_total) +
                      " attack lines"};
}

Outcome c3_exfil_roundtrip() {
    for (const auto& d : g_sets) {
        const auto rep = report::verify_dataset(d.root);
        for (const auto& item : rep.items) {
            const bool exfil = item.name == "exfiltrated bytes reconstruct" ||
                               item.name == "exfiltration stops a day early";
            if (exfil && item.status != "pass")
                return {false, "seed " + std::to_string(d.inst.seed) + ": " + item.name + " " +
                                   item.status + " (" + item.detail + ")"};
        }
    }
    std::size_t files = 0;
    for (const auto& d : g_sets) files += d.inst.attack.exfil_files.size();
    return {true, std::to_string(std::size(kSeeds)) + " seeds, " + std::to_string(files) +
                      " files byte-exact, all quiet a day before the intrusion"};
}

Outcome c4_scan_spike() {
    std::size_t min_spike = SIZE_MAX;
    double min_ratio = 1e9;
    for (const auto& d : g_sets) {
        const auto windows = step_windows(d);
        const auto it = windows.find("dirb-scan");
        if (it == windows.end())
            return {false, "seed " + std::to_string(d.inst.seed) + " has no dirb-scan record"};

        const auto* web = d.inst.host_by_role("intranet-server");
        const int year = tu::to_civil(d.inst.start).year;
        std::map<tu::UsecTime, std::size_t> hours;
        for (const auto& raw : read_lines(d.root / "gather" / web->hostname / "logs" /
                                          "apache2/access.log")) {
            const auto ev = logsynth::parse_line(logsynth::Format::ApacheAccess, raw, year);
            if (ev.ok) hours[ev.ts - ev.ts % tu::usec_per_hour] += 1;
        }
        const tu::UsecTime spike_hour = it->second.first - it->second.first % tu::usec_per_hour;
        const std::size_t spike = hours.count(spike_hour) ? hours.at(spike_hour) : 0;
        std::size_t normal_max = 0;
        for (const auto& [h, n] : hours)
            if (h != spike_hour) normal_max = std::max(normal_max, n);
        if (spike <= kSpikeLines || normal_max == 0 ||
            static_cast<double>(spike) <= kSpikeRatio * static_cast<double>(normal_max)) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "seed %llu: spike hour %zu lines vs normal max %zu",
                          static_cast<unsigned long long>(d.inst.seed), spike, normal_max);
            return {false, buf};
        }
        min_spike = std::min(min_spike, spike);
        min_ratio = std::min(min_ratio,
                             static_cast<double>(spike) / static_cast<double>(normal_max));
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "smallest spike %zu lines (> %zu), smallest ratio %.0fx (> %.0fx)",
                  min_spike, kSpikeLines, min_ratio, kSpikeRatio);
    return {true, buf};
}

Outcome c5_activity_band() {
    double lo = 1e9, hi = 0;
    for (const auto& d : g_sets) {
        const auto st = report::compute_stats(d.root);
        char buf[160];
        if (st.dns_mean < kDnsBandLo || st.dns_mean > kDnsBandHi || st.dns_std <= 0) {
            std::snprintf(buf, sizeof buf, "seed %llu: mean %.1f queries/day (std %.1f)",
                          static_cast<unsigned long long>(d.inst.seed), st.dns_mean, st.dns_std);
            return {false, buf};
        }
        lo = std::min(lo, st.dns_mean);
        hi = std::max(hi, st.dns_mean);

        for (const auto& u : d.inst.users) {
            if (u.work_start_min < kDayStartMin || u.work_end_min > kDayEndMin)
                return {false, u.login + " was given hours outside the permitted day"};
            const auto* h = d.inst.host_by_name(u.host);
            for (const auto& raw :
                 read_lines(d.root / "gather" / h->hostname / "logs" / "statemachine.log")) {
                const auto ts = tu::parse_rfc3339(json::parse(raw)["time"].get<std::string>());
                if (!ts) return {false, u.login + ": unparseable trace time"};
                const int minute = static_cast<int>((*ts % tu::usec_per_day) / tu::usec_per_min);
                if (minute < u.work_start_min || minute > u.work_end_min) {
                    std::snprintf(buf, sizeof buf,
                                  "seed %llu: %s acted at minute %d outside [%d, %d]",
                                  static_cast<unsigned long long>(d.inst.seed), u.login.c_str(),
                                  minute, u.work_start_min, u.work_end_min);
                    return {false, buf};
                }
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "daily means %.1f to %.1f inside [%.0f, %.0f], users stayed in their hours", lo,
                  hi, kDnsBandLo, kDnsBandHi);
    return {true, buf};
}

Outcome c6_variation() {
    std::set<std::size_t> host_counts, mail_counts;
    std::set<std::string> starts, users, blocks;
    std::set<std::string> escalations;

    for (const auto& d : g_sets) {
        host_counts.insert(d.inst.hosts.size());
        std::size_t mails = 0;
        for (const auto& h : d.inst.hosts)
            if (h.role == "mail-server") ++mails;
        mail_counts.insert(mails);

        const auto windows = step_windows(d);
        if (!windows.count("vpn-connect")) return {false, "missing vpn-connect record"};
        starts.insert(tu::rfc3339(windows.at("vpn-connect").first));
        users.insert(d.inst.attack.vpn_user + "/" + d.inst.attack.crack_user);
        blocks.insert(std::to_string(d.inst.attack.exfil_block));

        // the escalation block must keep its 7-line shape on every seed
        const auto& at = d.inst.attack;
        const auto* web = d.inst.host_by_role("intranet-server");
        const auto auth = read_lines(d.root / "gather" / web->hostname / "logs" / "auth.log");
        std::size_t su = auth.size();
        for (std::size_t i = 0; i < auth.size(); ++i)
            if (auth[i].find("Successful su for " + at.crack_user + " by www-data") !=
                std::string::npos)
                su = i;
        if (su + 4 >= auth.size())
            return {false, "seed " + std::to_string(d.inst.seed) + ": no su block"};
        const bool shaped =
            auth[su + 1].find("+ /dev/" + at.terminal + " www-data:" + at.crack_user) !=
                std::string::npos &&
            auth[su + 2].find("pam_unix(su:session): session opened") != std::string::npos &&
            auth[su + 3].find("New session " + at.session_id) != std::string::npos &&
            auth[su + 4].find("pam_unix(systemd-user:session)") != std::string::npos;
        std::size_t list = auth.size();
        for (std::size_t i = su; i < auth.size(); ++i)
            if (auth[i].find("COMMAND=list") != std::string::npos) {
                list = i;
                break;
            }
        if (!shaped || list + 1 >= auth.size() ||
            auth[list + 1].find("COMMAND=" + at.root_cmd) == std::string::npos)
            return {false,
                    "seed " + std::to_string(d.inst.seed) + ": escalation block malformed"};
        escalations.insert(at.crack_user + "|" + at.terminal + "|" + at.root_cmd);
    }

    auto varied = [](const auto& set) { return set.size() > 1; };
    if (!varied(host_counts) || !varied(mail_counts) || !varied(starts) || !varied(users) ||
        !varied(blocks))
        return {false, "a dimension is constant: hosts " + std::to_string(host_counts.size()) +
                           ", mail " + std::to_string(mail_counts.size()) + ", starts " +
                           std::to_string(starts.size()) + ", users " +
                           std::to_string(users.size()) + ", blocks " +
                           std::to_string(blocks.size())};
    if (escalations.size() < 2)
        return {false, "escalation block identical on all seeds"};
    return {true, "hosts/mail/starts/users/blocks take " + std::to_string(host_counts.size()) +
                      "/" + std::to_string(mail_counts.size()) + "/" +
                      std::to_string(starts.size()) + "/" + std::to_string(users.size()) + "/" +
                      std::to_string(blocks.size()) + " values; " +
                      std::to_string(escalations.size()) + " distinct 7-line escalations"};
}

Outcome c7_parse_back() {
    using logsynth::Format;
    rng::Stream r(987654321);
    std::size_t mismatches = 0, total = 0;
    for (Format f :
         {Format::ApacheAccess, Format::ApacheError, Format::SyslogAuth, Format::DnsQuery,
          Format::AuditKv, Format::MonitoringCsv, Format::Vpn, Format::Mail, Format::Horde,
          Format::Trace}) {
        for (int i = 0; i < kTuplesPerFormat; ++i) {
            ++total;
            const auto tuple = sampler::random_tuple(f, r);
            const auto line = logsynth::render_line(f, tuple);
            const auto back = logsynth::parse_line(f, line, 2022);
            if (!back.ok || back.ts != tuple.ts ||
                back.fields.size() != tuple.fields.size()) {
                ++mismatches;
                continue;
            }
            for (std::size_t k = 0; k < tuple.fields.size(); ++k)
                if (back.fields[k].key != tuple.fields[k].key ||
                    back.fields[k].value != tuple.fields[k].value) {
                    ++mismatches;
                    break;
                }
        }
    }
    return {mismatches == 0, std::to_string(total) + " tuples over 10 formats, " +
                                 std::to_string(mismatches) + " mismatches"};
}

Outcome c8_plan_ordering() {
    const auto tpl = model::ScenarioTemplate::load(LOGBED_DATA_DIR "/default_template.json");
    static const std::vector<std::string> chain = {
        "vpn-connect", "traceroute", "network-scan",  "dns-scan",      "service-scan",
        "wpscan",      "dirb-scan",  "webshell-upload", "webshell-cmd", "db-dump",
        "crack",       "escalate",   "escalated-cmd", "reverse-shell"};
    std::size_t violations = 0;
    for (int s = 1; s <= kPlanSeeds; ++s) {
        const auto inst = model::instantiate(tpl, static_cast<std::uint64_t>(s));
        auto r = rng::derive(inst.seed, "attack/plan");
        const auto plan = attack::plan_attack(inst, r);

        auto bad = [&](const char* why) {
            ++violations;
            std::fprintf(stderr, "plan seed %d: %s\n", s, why);
        };
        for (const auto& st : plan.steps)
            if (st.start > st.end) bad("a step ends before it starts");
        for (std::size_t i = 1; i < chain.size(); ++i)
            if (plan.step(chain[i]).start < plan.step(chain[i - 1]).end)
                bad("chain steps overlap");
        const auto& dirb = plan.step("dirb-scan");
        if (dirb.start / tu::usec_per_hour != dirb.end / tu::usec_per_hour)
            bad("dirb crosses an hour boundary");
        const auto& crack = plan.step("crack");
        if (crack.start % tu::usec_per_min != 0) bad("crack start off the minute grid");
        if (crack.end - crack.start !=
            static_cast<tu::UsecTime>(inst.attack.crack_minutes) * tu::usec_per_min)
            bad("crack length differs from the sampled minutes");
        const auto& exfil = plan.step("dnsteal");
        if (plan.step("vpn-connect").start - exfil.end < tu::usec_per_day)
            bad("exfiltration runs into the quiet day");
        if (exfil.start < inst.start || plan.step("reverse-shell").end >= inst.end)
            bad("plan leaks outside the scenario window");
    }
    return {violations == 0, std::to_string(kPlanSeeds) + " seeded plans, " +
                                 std::to_string(violations) + " ordering violations"};
}

} // namespace

int main() {
    fs::remove_all(work_root());

    const auto tpl = model::ScenarioTemplate::load(LOGBED_DATA_DIR "/default_template.json");
    for (const auto seed : kSeeds) {
        Dataset d{model::instantiate(tpl, seed),
                  work_root() / ("seed-" + std::to_string(seed))};
        logsynth::SinkSet sinks(d.root, false);
        sim::run(d.inst, sinks);
        g_sets.push_back(std::move(d));
    }

    struct Check {
        const char* name;
        Outcome (*fn)();
    };
    const Check checks[] = {
        {"determinism and runtime budget", c1_determinism},
        {"labeling recall and precision", c2_label_oracle},
        {"exfiltration round-trip and quiet day", c3_exfil_roundtrip},
        {"directory scan spike", c4_scan_spike},
        {"activity band and working hours", c5_activity_band},
        {"cross-seed variation", c6_variation},
        {"render and parse back", c7_parse_back},
        {"attack plan ordering", c8_plan_ordering},
    };

    bool all = true;
    int n = 0;
    for (const auto& c : checks) {
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        std::printf("%s  %d. %s: %s\n", o.pass ? "PASS" : "FAIL", ++n, c.name,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
