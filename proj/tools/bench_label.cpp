#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "logbed/core/time.hpp"
#include "logbed/label/engine.hpp"
#include "logbed/label/facts.hpp"
#include "logbed/label/rules.hpp"
#include "logbed/logsynth/sinks.hpp"
#include "logbed/model/model.hpp"
#include "logbed/sim/run.hpp"

namespace fs = std::filesystem;
using namespace logbed;
using clock_type = std::chrono::steady_clock;

namespace {

struct FileWork {
    std::string rel;
    logsynth::Format format;
    std::vector<std::string> lines;
    std::vector<const label::Rule*> rules;
};

double run_pass(const std::vector<FileWork>& work, const label::RuleSet& rs,
                const label::FactStore& facts, int year, timeutil::UsecTime t0,
                timeutil::UsecTime t1, bool parallel, std::size_t& hits) {
    hits = 0;
    const auto began = clock_type::now();
    for (const auto& w : work)
        hits += label::apply_rules(w.lines, w.format, year, w.rules, rs, facts, t0, t1, parallel)
                    .size();
    return std::chrono::duration<double>(clock_type::now() - began).count();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"times the rule-matching kernel, threaded against single-core"};
    std::string dataset;
    std::uint64_t seed = 1;
    int reps = 5;
    app.add_option("--dataset", dataset, "existing dataset root (default: simulate a fresh one)");
    app.add_option("--seed", seed, "seed for the fresh dataset");
    app.add_option("--reps", reps, "timed repetitions per variant")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    try {
        fs::path root = dataset;
        if (dataset.empty()) {
            root = fs::temp_directory_path() / ("logbed-bench-" + std::to_string(seed));
            fs::remove_all(root);
            const auto tpl =
                model::ScenarioTemplate::load(LOGBED_DATA_DIR "/default_template.json");
            const auto inst = model::instantiate(tpl, seed);
            logsynth::SinkSet sinks(root, false);
            sim::run(inst, sinks);
            std::cout << "simulated " << root.string() << "\n";
        }

        const auto inst = model::load_instance(root / "config" / "instance.txt");
        const auto rs = label::RuleSet::load(LOGBED_DATA_DIR "/default_rules.json");
        const auto facts = label::collect_facts(root, inst);
        const int year = timeutil::to_civil(inst.start).year;

        std::vector<FileWork> work;
        std::size_t total_lines = 0;
        for (const auto& h : inst.hosts) {
            for (const auto& f : logsynth::files_for_host(h)) {
                if (!f.labeled) continue;
                FileWork w;
                w.rel = h.hostname + "/logs/" + f.rel;
                w.format = f.format;
                w.lines = label::read_log_stream(root / "gather" / w.rel);
                for (const auto& r : rs.rules)
                    if (r.file == w.rel) w.rules.push_back(&r);
                total_lines += w.lines.size();
                work.push_back(std::move(w));
            }
        }
        std::cout << "matching " << rs.rules.size() << " rules over " << total_lines
                  << " lines in " << work.size() << " files, " << reps << " reps\n";

        std::size_t hits_par = 0, hits_ser = 0;
        double best_par = 1e100, best_ser = 1e100;
        // warmup settles page cache and thread pool
        run_pass(work, rs, facts, year, inst.start, inst.end, true, hits_par);
        for (int i = 0; i < reps; ++i) {
            std::size_t h = 0;
            best_par = std::min(best_par,
                                run_pass(work, rs, facts, year, inst.start, inst.end, true, h));
            hits_par = h;
            best_ser = std::min(best_ser,
                                run_pass(work, rs, facts, year, inst.start, inst.end, false, h));
            hits_ser = h;
        }

        if (hits_par != hits_ser) {
            std::cerr << "variants disagree: " << hits_par << " vs " << hits_ser << " hits\n";
            return 2;
        }
        const double rate_par = static_cast<double>(total_lines) / best_par;
        const double rate_ser = static_cast<double>(total_lines) / best_ser;
        std::printf("threaded  %8.3f ms  %10.0f lines/s\n", best_par * 1e3, rate_par);
        std::printf("serial    %8.3f ms  %10.0f lines/s\n", best_ser * 1e3, rate_ser);
        std::printf("speedup   %.2fx, %zu labeled lines from both\n", best_ser / best_par,
                    hits_par);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
