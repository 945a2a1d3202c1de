#include "logbed/report/stats.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "logbed/core/errors.hpp"
#include "logbed/core/text.hpp"
#include "logbed/core/time.hpp"
#include "logbed/label/engine.hpp"
#include "logbed/logsynth/format.hpp"
#include "logbed/logsynth/sinks.hpp"
#include "logbed/model/model.hpp"

namespace fs = std::filesystem;
namespace tu = logbed::timeutil;

namespace logbed::report {

namespace {

std::string date_of(tu::UsecTime ts) {
    const auto c = tu::to_civil(ts);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", c.year, c.month, c.day);
    return buf;
}

std::string hour_of(tu::UsecTime ts) {
    const auto c = tu::to_civil(ts);
    char buf[20];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d %02d", c.year, c.month, c.day, c.hour);
    return buf;
}

} // namespace

StatsReport compute_stats(const fs::path& dataset_root) {
    const auto inst = model::load_instance(dataset_root / "config" / "instance.txt");
    const int year = tu::to_civil(inst.start).year;
    StatsReport out;

    const auto* fw = inst.host_by_role("firewall");
    if (!fw) throw ValidationError("dataset has no firewall host");
    const fs::path dns_log = dataset_root / "gather" / fw->hostname / "logs" / "dnsmasq.log";
    if (!fs::exists(dns_log)) throw ValidationError("resolver log missing: " + dns_log.string());

    // known org services let us bucket queries by what was asked for
    std::map<std::string, std::string> service_of;
    for (const auto& h : inst.hosts)
        if (!h.fqdn.empty() && h.zone != "internet") service_of[h.fqdn] = h.hostname;

    std::map<std::string, DnsDay> days;
    for (const auto& raw : label::read_log_stream(dns_log)) {
        const auto ev = logsynth::parse_line(logsynth::Format::DnsQuery, raw, year);
        if (!ev.ok || ev.get("op") != "query") continue;
        const std::string& name = ev.get("name");
        const bool staged = inst.attack.enabled &&
                            text::ends_with(name, "." + inst.attack.exfil_domain);

        auto& day = days[date_of(ev.ts)];
        day.total += 1;
        if (!staged && ev.get("qtype") == "A") day.background += 1;

        std::string service = "external";
        if (auto it = service_of.find(name); it != service_of.end())
            service = it->second;
        else if (text::ends_with(name, "." + inst.org_domain))
            service = "org-other";
        else if (staged)
            service = "staging-domain";
        out.dns_hourly[service][static_cast<std::size_t>(tu::to_civil(ev.ts).hour)] += 1;
    }
    for (auto& [date, d] : days) {
        d.date = date;
        out.dns_days.push_back(d);
    }
    if (out.dns_days.empty()) throw ValidationError("resolver log holds no queries");

    double sum = 0;
    for (const auto& d : out.dns_days) sum += static_cast<double>(d.background);
    out.dns_mean = sum / static_cast<double>(out.dns_days.size());
    double var = 0;
    for (const auto& d : out.dns_days) {
        const double diff = static_cast<double>(d.background) - out.dns_mean;
        var += diff * diff;
    }
    out.dns_std = std::sqrt(var / static_cast<double>(out.dns_days.size()));
    out.single_day = out.dns_days.size() == 1;

    for (const auto& h : inst.hosts) {
        for (const auto& f : logsynth::files_for_host(h)) {
            if (f.format != logsynth::Format::ApacheAccess) continue;
            const auto lines =
                label::read_log_stream(dataset_root / "gather" / h.hostname / "logs" / f.rel);
            for (const auto& raw : lines) {
                const auto ev = logsynth::parse_line(f.format, raw, year);
                if (ev.ok) out.access_hourly[h.hostname][hour_of(ev.ts)] += 1;
            }
        }
    }

    // label timeline needs both the labels tree and the lines it points at
    if (fs::exists(dataset_root / "labels")) {
        for (const auto& h : inst.hosts) {
            for (const auto& f : logsynth::files_for_host(h)) {
                if (!f.labeled) continue;
                const std::string rel = h.hostname + "/logs/" + f.rel;
                const fs::path marks = dataset_root / "labels" / rel;
                if (!fs::exists(marks)) continue;
                const auto lines = label::read_log_stream(dataset_root / "gather" / rel);
                std::ifstream in(marks);
                std::string mark;
                while (std::getline(in, mark)) {
                    nlohmann::json j;
                    try {
                        j = nlohmann::json::parse(mark);
                    } catch (const nlohmann::json::exception&) {
                        continue;
                    }
                    const auto n = j["line"].get<std::size_t>();
                    if (n == 0 || n > lines.size()) continue;
                    const auto ev = logsynth::parse_line(f.format, lines[n - 1], year);
                    if (!ev.ok) continue;
                    for (const auto& l : j["labels"])
                        out.label_hourly[l.get<std::string>()][hour_of(ev.ts)] += 1;
                }
            }
        }
    }
    return out;
}

std::string StatsReport::render() const {
    std::ostringstream s;
    s << "== resolver queries per day ==\n";
    s << "date          total  background\n";
    for (const auto& d : dns_days) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%-12s %6zu  %10zu\n", d.date.c_str(), d.total,
                      d.background);
        s << buf;
    }
    char line[96];
    std::snprintf(line, sizeof line, "mean %.1f background queries/day, std %.1f over %zu days\n",
                  dns_mean, dns_std, dns_days.size());
    s << line;
    if (single_day) s << "warning: single-day dataset, daily std is 0 by construction\n";

    s << "\n== queried services, events per hour of day ==\n";
    for (const auto& [service, hours] : dns_hourly) {
        std::size_t total = 0;
        for (auto n : hours) total += n;
        s << "  " << service << ": " << total << " total\n";
    }

    s << "\n== web requests, busiest hours ==\n";
    for (const auto& [host, hours] : access_hourly) {
        std::vector<std::pair<std::size_t, std::string>> top;
        for (const auto& [hour, n] : hours) top.emplace_back(n, hour);
        std::sort(top.rbegin(), top.rend());
        if (top.size() > 3) top.resize(3);
        s << "  " << host << ":";
        for (const auto& [n, hour] : top) s << "  " << hour << "h=" << n;
        s << "\n";
    }

    if (!label_hourly.empty()) {
        s << "\n== labeled lines per label ==\n";
        for (const auto& [label, hours] : label_hourly) {
            std::size_t total = 0;
            for (const auto& [hour, n] : hours) total += n;
            s << "  " << label << ": " << total << "\n";
        }
    }
    return s.str();
}

std::string StatsReport::csv() const {
    std::ostringstream s;
    s << "section,key,bucket,count\n";
    for (const auto& d : dns_days) {
        s << "dns-day,total," << d.date << "," << d.total << "\n";
        s << "dns-day,background," << d.date << "," << d.background << "\n";
    }
    for (const auto& [service, hours] : dns_hourly)
        for (std::size_t h = 0; h < hours.size(); ++h)
            if (hours[h]) s << "dns-hourly," << service << "," << h << "," << hours[h] << "\n";
    for (const auto& [host, hours] : access_hourly)
        for (const auto& [hour, n] : hours)
            s << "access-hourly," << host << "," << hour << "," << n << "\n";
    for (const auto& [label, hours] : label_hourly)
        for (const auto& [hour, n] : hours)
            s << "label-hourly," << label << "," << hour << "," << n << "\n";
    return s.str();
}

} // namespace logbed::report
