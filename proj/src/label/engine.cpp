#include "logbed/label/engine.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "logbed/core/errors.hpp"
#include "logbed/core/hashio.hpp"
#include "logbed/core/text.hpp"
#include "logbed/logsynth/sinks.hpp"
#include "logbed/sim/world.hpp" // label windows share the simulator's slack

namespace logbed::label {

namespace fs = std::filesystem;
namespace tu = timeutil;

bool LabelReport::every_rule_matched() const {
    for (const auto& [id, n] : rule_counts)
        if (n == 0) return false;
    return !rule_counts.empty();
}

std::string LabelReport::render() const {
    std::ostringstream out;
    out << "labeling report\n";
    std::size_t total_lines = 0;
    for (const auto& f : files) total_lines += f.lines;
    out << "files: " << files.size() << ", lines: " << total_lines
        << ", labeled: " << labeled_lines << "\n\n";
    for (const auto& f : files)
        out << f.file << ": " << f.hits.size() << " labeled of " << f.lines << "\n";
    out << "\nrule matches\n";
    for (const auto& [id, n] : rule_counts) out << "  " << id << ": " << n << "\n";
    std::vector<std::string> silent;
    for (const auto& [id, n] : rule_counts)
        if (n == 0) silent.push_back(id);
    if (!silent.empty()) out << "\nrules with zero matches: " << text::join(silent, ", ") << "\n";
    return out.str();
}

std::vector<std::string> read_log_stream(const fs::path& file) {
    std::vector<std::string> out;
    auto append = [&out](const std::string& content) {
        std::size_t pos = 0;
        while (pos < content.size()) {
            auto nl = content.find('\n', pos);
            if (nl == std::string::npos) nl = content.size();
            out.emplace_back(content.substr(pos, nl - pos));
            pos = nl + 1;
        }
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw RuntimeFailure("cannot read " + p.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const fs::path gz = file.string() + ".2.gz";
    const fs::path prev = file.string() + ".1";
    if (fs::exists(gz)) append(hashio::gzip_decompress(slurp(gz)));
    if (fs::exists(prev)) append(slurp(prev));
    if (fs::exists(file)) append(slurp(file));
    return out;
}

namespace {

struct CompiledCond {
    std::string field;
    std::string op;
    std::string value;
    std::regex re;
};

struct CompiledRule {
    const Rule* rule;
    tu::UsecTime ws = 0;
    tu::UsecTime we = 0;
    std::vector<CompiledCond> conds;
    std::vector<std::string> closure;
};

bool cond_holds(const CompiledCond& c, const std::string& raw,
                const logsynth::ParsedLine& ev) {
    const std::string* v = nullptr;
    if (c.field == "_raw")
        v = &raw;
    else
        v = ev.find(c.field);
    if (!v) return false;
    if (c.op == "equals") return *v == c.value;
    if (c.op == "prefix") return text::starts_with(*v, c.value);
    if (c.op == "contains") return v->find(c.value) != std::string::npos;
    return std::regex_search(*v, c.re);
}

} // namespace

std::vector<LineLabels> apply_rules(const std::vector<std::string>& lines,
                                    logsynth::Format format, int year,
                                    const std::vector<const Rule*>& rules,
                                    const RuleSet& ruleset, const FactStore& facts,
                                    tu::UsecTime trim_start, tu::UsecTime trim_end,
                                    bool parallel) {
    std::vector<CompiledRule> compiled;
    for (const Rule* r : rules) {
        const auto w = facts.window(r->window);
        if (!w) continue; // step never ran, nothing can match
        CompiledRule c;
        c.rule = r;
        c.ws = w->first - sim::kLabelSlack;
        c.we = w->second + sim::kLabelSlack;
        for (const auto& cond : r->all) {
            CompiledCond cc;
            cc.field = cond.field;
            cc.op = cond.op;
            cc.value = facts.resolve(cond.value);
            if (cc.op == "regex") cc.re = std::regex(cc.value);
            c.conds.push_back(std::move(cc));
        }
        c.closure = ruleset.closure(r->label);
        compiled.push_back(std::move(c));
    }

    std::vector<LineLabels> per_line(lines.size());
    auto process = [&](std::size_t i) {
        const auto ev = logsynth::parse_line(format, lines[i], year);
        if (!ev.ok) return;
        if (ev.ts < trim_start || ev.ts > trim_end) return;
        std::set<std::string> labels;
        std::vector<std::string> hit_rules;
        for (const auto& c : compiled) {
            if (ev.ts < c.ws || ev.ts > c.we) continue;
            bool all = true;
            for (const auto& cond : c.conds)
                if (!cond_holds(cond, lines[i], ev)) {
                    all = false;
                    break;
                }
            if (!all) continue;
            labels.insert(c.closure.begin(), c.closure.end());
            hit_rules.push_back(c.rule->id);
        }
        if (labels.empty()) return;
        per_line[i].line = i + 1;
        per_line[i].labels.assign(labels.begin(), labels.end());
        per_line[i].rules = std::move(hit_rules);
    };

    if (parallel) {
#if defined(LOGBED_HAVE_OPENMP)
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(lines.size()); ++i)
            process(static_cast<std::size_t>(i));
#else
        for (std::size_t i = 0; i < lines.size(); ++i) process(i);
#endif
    } else {
        for (std::size_t i = 0; i < lines.size(); ++i) process(i);
    }

    std::vector<LineLabels> hits;
    for (auto& ll : per_line)
        if (ll.line != 0) hits.push_back(std::move(ll));
    return hits;
}

LabelReport label_dataset(const fs::path& dataset_root, const RuleSet& ruleset, bool parallel) {
    const auto inst = model::load_instance(dataset_root / "config" / "instance.txt");
    const auto facts = collect_facts(dataset_root, inst);
    const int year = tu::to_civil(inst.start).year;

    LabelReport report;
    for (const auto& r : ruleset.rules) report.rule_counts[r.id] = 0;

    for (const auto& h : inst.hosts) {
        for (const auto& f : logsynth::files_for_host(h)) {
            if (!f.labeled) continue;
            const std::string rel = h.hostname + "/logs/" + f.rel;

            std::vector<const Rule*> applicable;
            for (const auto& r : ruleset.rules)
                if (r.file == rel) applicable.push_back(&r);

            FileResult res;
            res.file = rel;
            const auto lines = read_log_stream(dataset_root / "gather" / rel);
            res.lines = lines.size();
            res.hits = apply_rules(lines, f.format, year, applicable, ruleset, facts, inst.start,
                                   inst.end, parallel);

            std::string content;
            for (const auto& hit : res.hits) {
                nlohmann::json rec{
                    {"line", hit.line}, {"labels", hit.labels}, {"rules", hit.rules}};
                content += rec.dump();
                content += '\n';
            }
            const fs::path out = dataset_root / "labels" / rel;
            fs::create_directories(out.parent_path());
            std::ofstream of(out, std::ios::binary | std::ios::trunc);
            if (!of) throw RuntimeFailure("cannot write " + out.string());
            of << content;

            for (const auto& hit : res.hits)
                for (const auto& id : hit.rules) ++report.rule_counts[id];
            report.labeled_lines += res.hits.size();
            report.files.push_back(std::move(res));
        }
    }

    std::ofstream rep(dataset_root / "labeling-report.txt", std::ios::trunc);
    rep << report.render();
    return report;
}

} // namespace logbed::label
