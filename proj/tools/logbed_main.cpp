#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "logbed/core/errors.hpp"
#include "logbed/core/time.hpp"
#include "logbed/label/engine.hpp"
#include "logbed/label/rules.hpp"
#include "logbed/logsynth/sinks.hpp"
#include "logbed/model/model.hpp"
#include "logbed/report/manifest.hpp"
#include "logbed/report/stats.hpp"
#include "logbed/report/verify.hpp"
#include "logbed/sim/run.hpp"

namespace fs = std::filesystem;
using namespace logbed;

namespace {

constexpr int kOk = 0;
constexpr int kBadInput = 1;
constexpr int kRuntime = 2;
constexpr int kVerifyFailed = 3;

fs::path default_out() {
    if (const char* env = std::getenv("LOGBED_OUT")) return env;
    return fs::current_path();
}

void write_file(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeFailure("cannot write " + p.string());
    out << content;
}

int run_generate(const std::string& template_path, std::uint64_t seed, fs::path out) {
    const auto tpl = model::ScenarioTemplate::load(template_path);
    const auto inst = model::instantiate(tpl, seed);
    if (out.empty()) out = default_out();
    const fs::path file = out / ("instance-" + std::to_string(seed) + ".json");
    write_file(file, model::canonical_instance_text(inst));
    std::cout << file.string() << "\n";
    return kOk;
}

int run_simulate(const std::string& instance_path, fs::path out, bool publish) {
    const auto inst = model::load_instance(instance_path);
    if (out.empty()) out = default_out() / ("dataset-" + std::to_string(inst.seed));
    logsynth::SinkSet sinks(out, publish);
    const auto lines = sim::run(inst, sinks);
    report::manifest_update(out, "simulate", timeutil::rfc3339(inst.end),
                            {{"instance", instance_path},
                             {"seed", inst.seed},
                             {"publish", publish}});
    std::cout << out.string() << ": " << lines << " lines\n";
    return kOk;
}

int run_label(const fs::path& dataset, const std::string& rules_path) {
    const auto rules = label::RuleSet::load(rules_path);
    const auto rep = label::label_dataset(dataset, rules);
    std::cout << rep.render();
    const auto inst = model::load_instance(dataset / "config" / "instance.txt");
    report::manifest_update(dataset, "label", timeutil::rfc3339(inst.end),
                            {{"rules", rules_path}});
    if (!rep.every_rule_matched()) {
        std::cerr << "error: some rules matched nothing\n";
        return kVerifyFailed;
    }
    return kOk;
}

int run_stats(const fs::path& dataset) {
    const auto st = report::compute_stats(dataset);
    std::cout << st.render();
    write_file(dataset / "stats-report.txt", st.render());
    write_file(dataset / "stats.csv", st.csv());
    return kOk;
}

int run_verify(const fs::path& dataset) {
    const auto rep = report::verify_dataset(dataset);
    std::cout << rep.render();
    return rep.ok() ? kOk : kVerifyFailed;
}

struct SeedRange {
    std::uint64_t lo = 0, hi = 0;
};

SeedRange parse_seeds(const std::string& text) {
    SeedRange r;
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            r.lo = r.hi = std::stoull(text);
        } else {
            r.lo = std::stoull(text.substr(0, dots));
            r.hi = std::stoull(text.substr(dots + 2));
        }
    } catch (const std::exception&) {
        throw ValidationError("seeds must look like 7 or 1..8, got " + text);
    }
    if (r.hi < r.lo) throw ValidationError("seed range is backwards: " + text);
    if (r.hi - r.lo > 9999) throw ValidationError("seed range is unreasonably large");
    return r;
}

int run_batch(const std::string& template_path, const std::string& seeds, fs::path out,
              bool publish, const std::string& rules_path, unsigned jobs) {
    const auto range = parse_seeds(seeds);
    const auto tpl = model::ScenarioTemplate::load(template_path);
    const auto rules = label::RuleSet::load(rules_path);
    if (out.empty()) out = default_out();

    std::vector<std::uint64_t> todo;
    for (auto s = range.lo; s <= range.hi; ++s) todo.push_back(s);
    if (jobs == 0) jobs = std::thread::hardware_concurrency();
    if (jobs == 0) jobs = 1;
    if (jobs > todo.size()) jobs = static_cast<unsigned>(todo.size());

    std::atomic<std::size_t> next{0};
    std::atomic<int> worst{kOk};
    std::vector<std::string> notes(todo.size());

    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < todo.size(); i = next.fetch_add(1)) {
            const auto seed = todo[i];
            const fs::path root = out / ("dataset-" + std::to_string(seed));
            try {
                const auto inst = model::instantiate(tpl, seed);
                logsynth::SinkSet sinks(root, publish);
                const auto lines = sim::run(inst, sinks);
                report::manifest_update(root, "simulate", timeutil::rfc3339(inst.end),
                                        {{"template", template_path},
                                         {"seed", seed},
                                         {"publish", publish}});
                const auto rep = label::label_dataset(root, rules);
                report::manifest_update(root, "label", timeutil::rfc3339(inst.end),
                                        {{"rules", rules_path}});
                notes[i] = root.string() + ": " + std::to_string(lines) + " lines, " +
                           std::to_string(rep.labeled_lines) + " labeled";
                if (!rep.every_rule_matched()) {
                    notes[i] += " [rules with zero matches]";
                    int cur = worst.load();
                    while (cur < kVerifyFailed && !worst.compare_exchange_weak(cur, kVerifyFailed))
                        ;
                }
            } catch (const ValidationError& e) {
                notes[i] = root.string() + ": invalid: " + e.what();
                int cur = worst.load();
                while (cur < kBadInput && !worst.compare_exchange_weak(cur, kBadInput))
                    ;
            } catch (const std::exception& e) {
                notes[i] = root.string() + ": failed: " + e.what();
                int cur = worst.load();
                while (cur < kRuntime && !worst.compare_exchange_weak(cur, kRuntime))
                    ;
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    for (const auto& n : notes) std::cout << n << "\n";
    return worst.load();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic log dataset generator with ground-truth labels"};
    app.require_subcommand(1);

    std::string template_path, instance_path, seeds;
    std::string rules_path = LOGBED_DATA_DIR "/default_rules.json";
    std::string out, dataset;
    std::uint64_t seed = 1;
    bool publish = false;
    unsigned jobs = 0;

    auto* gen = app.add_subcommand("generate", "instantiate a scenario from a template");
    gen->add_option("--template", template_path, "template json")->required();
    gen->add_option("--seed", seed, "instance seed")->required();
    gen->add_option("--out", out, "output directory (default $LOGBED_OUT or .)");

    auto* sim = app.add_subcommand("simulate", "produce the dataset tree for an instance");
    sim->add_option("--instance", instance_path, "instance file from generate")->required();
    sim->add_option("--out", out, "dataset root");
    sim->add_flag("--publish", publish, "omit the provenance side channel");

    auto* lab = app.add_subcommand("label", "apply labeling rules to a dataset");
    lab->add_option("--dataset", dataset, "dataset root")->required();
    lab->add_option("--rules", rules_path, "rules json");

    auto* st = app.add_subcommand("stats", "summarize activity in a dataset");
    st->add_option("--dataset", dataset, "dataset root")->required();

    auto* ver = app.add_subcommand("verify", "re-check dataset invariants");
    ver->add_option("--dataset", dataset, "dataset root")->required();

    auto* bat = app.add_subcommand("batch", "generate+simulate+label a seed range");
    bat->add_option("--template", template_path, "template json")->required();
    bat->add_option("--seeds", seeds, "seed or range, e.g. 1..8")->required();
    bat->add_option("--out", out, "root holding one dataset per seed");
    bat->add_option("--jobs", jobs, "parallel workers (default: hardware)");
    bat->add_flag("--publish", publish, "omit the provenance side channel");
    bat->add_option("--rules", rules_path, "rules json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return run_generate(template_path, seed, out);
        if (sim->parsed()) return run_simulate(instance_path, out, publish);
        if (lab->parsed()) return run_label(dataset, rules_path);
        if (st->parsed()) return run_stats(dataset);
        if (ver->parsed()) return run_verify(dataset);
        if (bat->parsed()) return run_batch(template_path, seeds, out, publish, rules_path, jobs);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const VerificationFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kVerifyFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kBadInput;
}
