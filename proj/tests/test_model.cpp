#include <doctest.h>

#include <set>

#include "logbed/behavior/topology.hpp"
#include "logbed/core/errors.hpp"
#include "logbed/model/model.hpp"

using namespace logbed;
using namespace logbed::model;
using nlohmann::json;

namespace {
ScenarioTemplate default_template() {
    return ScenarioTemplate::load(std::string(LOGBED_DATA_DIR) + "/default_template.json");
}
} // namespace

TEST_CASE("space parsing accepts the documented kinds") {
    PoolTable pools;
    pools.pools["names"] = {"alpha", "beta"};
    rng::Stream r(1);

    auto s = parse_space(json::parse(R"({"int":[3,9]})"), "f");
    for (int i = 0; i < 50; ++i) {
        const auto v = sample(s, r, pools, "f").get<std::int64_t>();
        CHECK(v >= 3);
        CHECK(v <= 9);
    }

    s = parse_space(json::parse(R"({"real":[0.4,2.5]})"), "f");
    for (int i = 0; i < 50; ++i) {
        const double v = sample(s, r, pools, "f").get<double>();
        CHECK(v >= 0.4);
        CHECK(v < 2.5);
    }

    s = parse_space(json::parse(R"({"choice":["a","b","c"]})"), "f");
    std::set<std::string> seen;
    for (int i = 0; i < 60; ++i) seen.insert(sample(s, r, pools, "f").get<std::string>());
    CHECK(seen.size() == 3);

    s = parse_space(json::parse(R"({"time_window":{"start":["05:00","09:00"],"end":["17:00","22:00"]}})"),
                    "f");
    for (int i = 0; i < 50; ++i) {
        const json w = sample(s, r, pools, "f");
        CHECK(w["start_min"].get<int>() >= 300);
        CHECK(w["start_min"].get<int>() <= 540);
        CHECK(w["end_min"].get<int>() >= 1020);
        CHECK(w["end_min"].get<int>() <= 1320);
    }

    s = parse_space(json::parse(R"({"pool":"names"})"), "f");
    seen.clear();
    for (int i = 0; i < 40; ++i) seen.insert(sample(s, r, pools, "f").get<std::string>());
    CHECK(seen == std::set<std::string>{"alpha", "beta"});
}

TEST_CASE("malformed spaces raise errors that name the field") {
    PoolTable pools;
    rng::Stream r(1);
    CHECK_THROWS_WITH_AS(parse_space(json::parse(R"({"int":[3]})"), "counts.mail_servers"),
                         doctest::Contains("counts.mail_servers"), ValidationError);
    CHECK_THROWS_AS(parse_space(json::parse(R"({"range":[1,2]})"), "f"), ValidationError);
    CHECK_THROWS_AS(sample(parse_space(json::parse(R"({"int":[9,3]})"), "f"), r, pools, "f"),
                    ValidationError);
    CHECK_THROWS_AS(sample(parse_space(json::parse(R"({"choice":[]})"), "f"), r, pools, "f"),
                    ValidationError);
    CHECK_THROWS_AS(sample(parse_space(json::parse(R"({"pool":"ghost"})"), "f"), r, pools, "f"),
                    ValidationError);
    // a window whose end could precede its start is rejected up front
    CHECK_THROWS_AS(
        sample(parse_space(json::parse(
                   R"({"time_window":{"start":["05:00","09:00"],"end":["08:00","22:00"]}})"),
                           "f"),
               r, pools, "f"),
        ValidationError);
}

TEST_CASE("instantiation is deterministic for a fixed seed") {
    const auto tpl = default_template();
    const auto a = instantiate(tpl, 42);
    const auto b = instantiate(tpl, 42);
    CHECK(canonical_instance_text(a) == canonical_instance_text(b));
    const auto c = instantiate(tpl, 43);
    CHECK(canonical_instance_text(a) != canonical_instance_text(c));
}

TEST_CASE("instances satisfy the structural invariants across seeds") {
    const auto tpl = default_template();
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto inst = instantiate(tpl, seed);
        CHECK_NOTHROW(check_instance(inst));
        CHECK(inst.users.size() >= 9);
        CHECK(inst.users.size() <= 27);
        const auto mails = inst.hosts_by_role("mail-server");
        CHECK(mails.size() >= 2);
        CHECK(mails.size() <= 4);
        CHECK(mails[0]->zone == "dmz");
        for (std::size_t i = 1; i < mails.size(); ++i) CHECK(mails[i]->zone == "internet");
        CHECK(inst.days() >= 4);
        CHECK(inst.attack.day_offset >= 3);
        CHECK(inst.attack.day_offset <= inst.days() - 1);
        CHECK(inst.attack.exfil_days <= inst.attack.day_offset - 1);
        CHECK(inst.attack.exfil_subdomains == 200 / inst.attack.exfil_block);
        CHECK(!inst.attack.exfil_files.empty());
        CHECK(inst.user(inst.attack.vpn_user)->kind == "remote");
        CHECK(inst.user(inst.attack.crack_user)->kind == "internal");
    }
}

TEST_CASE("weights normalize per source state over the full catalog") {
    const auto tpl = default_template();
    const auto inst = instantiate(tpl, 7);
    const auto keys = behavior::weight_keys();
    for (const auto& u : inst.users) {
        REQUIRE(u.weights.size() == keys.size());
        std::map<std::string, double> sums;
        for (const auto& [key, w] : u.weights) sums[key.substr(0, key.find("->"))] += w;
        for (const auto& [state, sum] : sums) CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("instance text round-trips through the parser") {
    const auto tpl = default_template();
    const auto inst = instantiate(tpl, 9);
    const auto text = canonical_instance_text(inst);
    const auto back = ScenarioInstance::from_json(json::parse(text));
    CHECK(canonical_instance_text(back) == text);
    CHECK_NOTHROW(check_instance(back));
}

TEST_CASE("sampling a missing template key names the path") {
    auto tpl = default_template();
    tpl.doc["counts"].erase("mail_servers");
    CHECK_THROWS_WITH_AS(instantiate(tpl, 1), doctest::Contains("counts.mail_servers"),
                         ValidationError);
}

TEST_CASE("instance checks catch corrupted documents") {
    const auto tpl = default_template();
    auto inst = instantiate(tpl, 11);

    auto broken = inst;
    broken.users[0].work_start_min = 240; // 04:00
    CHECK_THROWS_AS(check_instance(broken), ValidationError);

    broken = inst;
    broken.hosts[1].addr = broken.hosts[0].addr;
    CHECK_THROWS_AS(check_instance(broken), ValidationError);

    broken = inst;
    broken.attack.exfil_days = broken.attack.day_offset; // too close to the attack day
    CHECK_THROWS_AS(check_instance(broken), ValidationError);

    broken = inst;
    broken.users[0].weights["cloud.files->upload"] *= 2;
    CHECK_THROWS_AS(check_instance(broken), ValidationError);
}
