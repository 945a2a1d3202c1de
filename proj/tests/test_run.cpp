#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "logbed/core/hashio.hpp"
#include "logbed/core/rng.hpp"
#include "logbed/core/text.hpp"
#include "logbed/core/time.hpp"
#include "logbed/logsynth/format.hpp"
#include "logbed/model/model.hpp"
#include "logbed/sim/run.hpp"

namespace fs = std::filesystem;
namespace tu = logbed::timeutil;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("logbed-run-" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> read_lines(const fs::path& p) {
    std::vector<std::string> out;
    std::ifstream in(p);
    REQUIRE(in.good());
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

// one full simulated dataset, shared between the checks below
struct RunOutput {
    logbed::model::ScenarioInstance inst;
    fs::path root;
};

const RunOutput& attack_run() {
    static const RunOutput out = [] {
        auto tpl = logbed::model::ScenarioTemplate::load(LOGBED_DATA_DIR
                                                         "/default_template.json");
        RunOutput o{logbed::model::instantiate(tpl, 1001), fresh_dir("attack")};
        logbed::logsynth::SinkSet sinks(o.root, false);
        logbed::sim::run(o.inst, sinks);
        return o;
    }();
    return out;
}

std::map<std::string, std::string> tree_digest(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file())
            out[fs::relative(e.path(), root).string()] =
                logbed::hashio::sha256_hex(slurp(e.path()));
    return out;
}

} // namespace

TEST_CASE("the same instance always produces the same bytes") {
    const auto& a = attack_run();
    const auto root2 = fresh_dir("attack-again");
    logbed::logsynth::SinkSet sinks(root2, false);
    logbed::sim::run(a.inst, sinks);
    const auto d1 = tree_digest(a.root);
    const auto d2 = tree_digest(root2);
    CHECK(d1 == d2);
    CHECK(!d1.empty());
    fs::remove_all(root2);
}

TEST_CASE("an empty company still hums along") {
    auto doc = json::parse(slurp(LOGBED_DATA_DIR "/default_template.json"));
    doc["counts"]["internal_employees"]["int"] = {0, 0};
    doc["counts"]["remote_employees"]["int"] = {0, 0};
    doc["counts"]["external_users"]["int"] = {0, 0};
    doc["attack"]["enabled"] = false;
    auto tpl = logbed::model::ScenarioTemplate::from_json(doc, LOGBED_DATA_DIR);
    auto inst = logbed::model::instantiate(tpl, 77);
    REQUIRE(inst.users.empty());
    REQUIRE(!inst.attack.enabled);

    const auto root = fresh_dir("background");
    logbed::logsynth::SinkSet sinks(root, false);
    logbed::sim::run(inst, sinks);

    std::size_t lines = 0;
    for (const auto& raw : read_lines(root / "provenance.ndjson")) {
        auto j = json::parse(raw);
        CHECK(j["tag"] == "normal");
        ++lines;
    }
    CHECK(lines > 0);

    const auto* web = inst.host_by_role("intranet-server");
    const auto metrics = read_lines(root / "gather" / web->hostname / "logs" / "monitoring.csv");
    // one sample per minute for the whole window
    CHECK(metrics.size() > static_cast<std::size_t>(inst.days()) * 24 * 60 - 10);
    const auto* fw = inst.host_by_role("firewall");
    CHECK(!read_lines(root / "gather" / fw->hostname / "logs" / "dnsmasq.log").empty());
}

TEST_CASE("every attack step leaves its mark") {
    const auto& a = attack_run();
    std::set<std::string> tags;
    for (const auto& raw : read_lines(a.root / "provenance.ndjson"))
        tags.insert(json::parse(raw)["tag"].get<std::string>());
    for (const auto& id :
         {"vpn-connect", "traceroute", "network-scan", "dns-scan", "service-scan", "wpscan",
          "dirb-scan", "webshell-upload", "webshell-cmd", "db-dump", "crack", "escalate",
          "escalated-cmd", "reverse-shell", "dnsteal"})
        CHECK_MESSAGE(tags.count(id) == 1, "missing manifestations for ", id);
}

TEST_CASE("the privilege escalation block keeps its known shape") {
    const auto& a = attack_run();
    const auto& at = a.inst.attack;
    const auto* web = a.inst.host_by_role("intranet-server");
    const auto auth = read_lines(a.root / "gather" / web->hostname / "logs" / "auth.log");

    std::size_t su = auth.size();
    for (std::size_t i = 0; i < auth.size(); ++i)
        if (auth[i].find("Successful su for " + at.crack_user + " by www-data") !=
            std::string::npos)
            su = i;
    REQUIRE(su + 4 < auth.size());

    const std::string stamp = auth[su].substr(0, 15);
    for (int k = 1; k <= 4; ++k) CHECK(auth[su + k].substr(0, 15) == stamp);
    CHECK(auth[su + 1].find("+ /dev/" + at.terminal + " www-data:" + at.crack_user) !=
          std::string::npos);
    CHECK(auth[su + 2].find("pam_unix(su:session): session opened for user " + at.crack_user +
                            " by (uid=33)") != std::string::npos);
    CHECK(auth[su + 3].find("New session " + at.session_id + " of user " + at.crack_user + ".") !=
          std::string::npos);
    CHECK(auth[su + 4].find("pam_unix(systemd-user:session): session opened for user " +
                            at.crack_user + " by (uid=0)") != std::string::npos);

    // the two sudo invocations follow within seconds
    std::size_t list = auth.size();
    for (std::size_t i = su; i < auth.size(); ++i)
        if (auth[i].find("COMMAND=list") != std::string::npos) {
            list = i;
            break;
        }
    REQUIRE(list + 1 < auth.size());
    CHECK(auth[list].find("sudo:") != std::string::npos);
    CHECK(auth[list].find(at.crack_user + " : TTY=" + at.terminal) != std::string::npos);
    CHECK(auth[list + 1].find("COMMAND=" + at.root_cmd) != std::string::npos);

    const int year = tu::to_civil(a.inst.start).year;
    const auto t_su = tu::parse_syslog_stamp(stamp, year);
    const auto t_list = tu::parse_syslog_stamp(auth[list].substr(0, 15), year);
    REQUIRE(t_su.has_value());
    REQUIRE(t_list.has_value());
    CHECK(*t_list - *t_su >= 8 * tu::usec_per_sec);
    CHECK(*t_list - *t_su <= 40 * tu::usec_per_sec);
}

TEST_CASE("employees act only inside their working hours") {
    const auto& a = attack_run();
    for (const auto& u : a.inst.users) {
        const auto* h = a.inst.host_by_name(u.host);
        REQUIRE(h != nullptr);
        const auto trace =
            read_lines(a.root / "gather" / h->hostname / "logs" / "statemachine.log");
        CHECK(!trace.empty());
        for (const auto& raw : trace) {
            auto ts = tu::parse_rfc3339(json::parse(raw)["time"].get<std::string>());
            REQUIRE(ts.has_value());
            const int minute = static_cast<int>((*ts % tu::usec_per_day) / tu::usec_per_min);
            CHECK(minute >= u.work_start_min);
            CHECK(minute <= u.work_end_min);
        }
    }
}

TEST_CASE("exfiltrated files round-trip from the resolver log") {
    const auto& a = attack_run();
    const auto& at = a.inst.attack;
    const auto* fw = a.inst.host_by_role("firewall");
    const auto* share = a.inst.host_by_role("file-share");

    // pull the query names for the staging domain, in emission order
    std::vector<std::string> names;
    const int year = tu::to_civil(a.inst.start).year;
    for (const auto& raw :
         read_lines(a.root / "gather" / fw->hostname / "logs" / "dnsmasq.log")) {
        auto ev = logbed::logsynth::parse_line(logbed::logsynth::Format::DnsQuery, raw, year);
        if (!ev.ok) continue;
        if (ev.get("op") != "query") continue;
        const std::string name = ev.get("name");
        if (!logbed::text::ends_with(name, "." + at.exfil_domain)) continue;
        CHECK(ev.get("client") == share->addr);
        names.push_back(name.substr(0, name.size() - at.exfil_domain.size() - 1));
    }
    REQUIRE(!names.empty());

    // metadata queries announce <b64 name>.<chunks>; data queries carry the
    // base64 stream chopped into labels
    std::map<std::string, std::string> rebuilt;
    std::size_t i = 0;
    while (i < names.size()) {
        auto meta = logbed::text::split(names[i], '.');
        REQUIRE(meta.size() == 2);
        const auto fname = logbed::text::base64_decode(meta[0]);
        REQUIRE(fname.has_value());
        const std::size_t chunks = static_cast<std::size_t>(std::stoull(meta[1]));
        ++i;
        std::string b64;
        std::size_t got = 0;
        while (got < chunks) {
            REQUIRE(i < names.size());
            for (const auto& label : logbed::text::split(names[i], '.')) {
                b64 += label;
                ++got;
            }
            ++i;
        }
        auto bytes = logbed::text::base64_decode(b64);
        REQUIRE(bytes.has_value());
        rebuilt[*fname] = at.exfil_compress ? logbed::hashio::zlib_decompress(*bytes) : *bytes;
    }

    REQUIRE(rebuilt.size() == at.exfil_files.size());
    for (const auto& f : a.inst.files) {
        if (!rebuilt.count(f.name)) continue;
        auto r = logbed::rng::derive(a.inst.seed, "file/" + f.name);
        std::string expect(static_cast<std::size_t>(f.size), '\0');
        for (auto& ch : expect) ch = static_cast<char>(r.uniform_int(0, 255));
        CHECK(rebuilt[f.name] == expect);
    }

    // the trickle goes quiet at least a full day before the intrusion
    const auto* attacker = a.inst.host_by_role("attacker");
    tu::UsecTime exfil_end = 0, chain_start = 0;
    for (const auto& raw :
         read_lines(a.root / "gather" / attacker->hostname / "logs" / "statemachine.log")) {
        auto j = json::parse(raw);
        if (!j.contains("step")) continue;
        if (j["step"] == "dnsteal") exfil_end = *tu::parse_rfc3339(j["end"].get<std::string>());
        if (j["step"] == "vpn-connect")
            chain_start = *tu::parse_rfc3339(j["start"].get<std::string>());
    }
    REQUIRE(exfil_end > 0);
    REQUIRE(chain_start > 0);
    CHECK(chain_start - exfil_end >= tu::usec_per_day);
}

TEST_CASE("a passive scan stays quieter than a mixed one") {
    const auto& a = attack_run();
    auto count_wpscan = [](const fs::path& root) {
        std::size_t n = 0;
        for (const auto& raw : read_lines(root / "provenance.ndjson"))
            if (json::parse(raw)["tag"] == "wpscan") ++n;
        return n;
    };

    auto inst = a.inst;
    inst.attack.wpscan_mode = "passive";
    const auto root_p = fresh_dir("wpscan-passive");
    {
        logbed::logsynth::SinkSet sinks(root_p, false);
        logbed::sim::run(inst, sinks);
    }
    inst.attack.wpscan_mode = "mixed";
    const auto root_m = fresh_dir("wpscan-mixed");
    {
        logbed::logsynth::SinkSet sinks(root_m, false);
        logbed::sim::run(inst, sinks);
    }
    const auto n_p = count_wpscan(root_p);
    const auto n_m = count_wpscan(root_m);
    CHECK(n_p >= 15);
    CHECK(n_m >= n_p + 40);
    fs::remove_all(root_p);
    fs::remove_all(root_m);
}
