#include "logbed/logsynth/sinks.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "logbed/core/errors.hpp"
#include "logbed/core/hashio.hpp"

namespace logbed::logsynth {

namespace fs = std::filesystem;
using timeutil::UsecTime;

std::vector<LayoutFile> files_for_host(const model::Host& host) {
    const auto access = LayoutFile{"apache2/access.log", Format::ApacheAccess, false, false};
    const auto error = LayoutFile{"apache2/error.log", Format::ApacheError, false, false};
    const auto auth = LayoutFile{"auth.log", Format::SyslogAuth, false, false};
    const auto journal = LayoutFile{"journal.log", Format::SyslogAuth, false, false};
    const auto syslog = LayoutFile{"syslog", Format::SyslogAuth, false, true};
    const auto audit = LayoutFile{"audit/audit.log", Format::AuditKv, false, false};
    const auto trace = LayoutFile{"statemachine.log", Format::Trace, false, false};
    auto labeled = [](LayoutFile f) {
        f.labeled = true;
        return f;
    };

    const std::string& r = host.role;
    if (r == "internal" || r == "remote" || r == "external" || r == "attacker") return {trace};
    if (r == "intranet-server")
        return {labeled(access),
                labeled(error),
                labeled(auth),
                journal,
                syslog,
                labeled(audit),
                {"monitoring.csv", Format::MonitoringCsv, true, false}};
    if (r == "file-share")
        return {access, error,        auth, journal, syslog, labeled(audit),
                {"monitoring.csv", Format::MonitoringCsv, false, false}};
    if (r == "mail-server") {
        std::vector<LayoutFile> out;
        if (host.zone == "dmz") {
            out.push_back(access);
            out.push_back(error);
        }
        out.push_back(auth);
        out.push_back(syslog);
        if (host.zone == "dmz") out.push_back(audit);
        out.push_back({"exim4/mainlog", Format::Mail, false, false});
        out.push_back({"horde/access.log", Format::Horde, false, false});
        out.push_back({"horde/error.log", Format::Horde, false, false});
        out.push_back({"mail.info", Format::SyslogAuth, false, false});
        out.push_back({"mail.warn", Format::SyslogAuth, false, false});
        out.push_back({"messages", Format::SyslogAuth, false, false});
        out.push_back({"user.log", Format::SyslogAuth, false, false});
        return out;
    }
    if (r == "firewall")
        return {auth,   journal, {"dnsmasq.log", Format::DnsQuery, true, false},
                syslog, audit,   {"kern.log", Format::SyslogAuth, false, false}};
    if (r == "dns-server")
        return {auth, journal, {"dnsmasq.log", Format::DnsQuery, false, false}, syslog};
    if (r == "vpn-server")
        return {auth, journal, {"openvpn.log", Format::Vpn, true, false}, syslog, audit};
    if (r == "web-server" || r == "cloud-share") return {auth, journal, syslog, audit};
    throw ValidationError("no log layout for host role " + r);
}

SinkSet::SinkSet(fs::path dataset_root, bool publish)
    : root_(std::move(dataset_root)), publish_(publish) {}

void SinkSet::open(const model::ScenarioInstance& inst) {
    for (const auto& h : inst.hosts) {
        for (const auto& f : files_for_host(h)) {
            FileBuf buf;
            buf.host = h.hostname;
            buf.rel = f.rel;
            buf.rotated = f.rotated;
            files_.emplace(h.hostname + "\n" + f.rel, std::move(buf));
        }
    }
}

void SinkSet::write(const std::string& host, const std::string& rel, UsecTime ts,
                    std::string line, const std::string& tag) {
    auto it = files_.find(host + "\n" + rel);
    if (it == files_.end())
        throw RuntimeFailure("write to unregistered log file " + host + "/" + rel);
    FileBuf& buf = it->second;
    if (ts < buf.last_ts)
        throw RuntimeFailure("timestamp regression in " + host + "/" + rel);
    buf.last_ts = ts;
    buf.lines.push_back({ts, std::move(line), tag});
}

std::size_t SinkSet::line_count() const {
    std::size_t n = 0;
    for (const auto& [k, buf] : files_) n += buf.lines.size();
    return n;
}

namespace {

void write_text(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeFailure("cannot open " + p.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw RuntimeFailure("short write to " + p.string());
}

std::string join_lines(const std::vector<const std::string*>& lines) {
    std::string out;
    std::size_t n = 0;
    for (const auto* l : lines) n += l->size() + 1;
    out.reserve(n);
    for (const auto* l : lines) {
        out += *l;
        out += '\n';
    }
    return out;
}

} // namespace

void SinkSet::flush_inner(const model::ScenarioInstance& inst) {
    // (dataset-relative path, line number, tag) per physical file
    std::vector<std::tuple<std::string, std::size_t, std::string>> prov;

    for (auto& [key, buf] : files_) {
        const std::string base = "gather/" + buf.host + "/logs/" + buf.rel;

        struct Part {
            std::string path;
            bool gz;
            std::vector<const std::string*> lines;
            std::vector<const Line*> full;
        };
        std::vector<Part> parts;
        if (!buf.rotated) {
            parts.push_back({base, false, {}, {}});
            for (const auto& l : buf.lines) {
                parts[0].lines.push_back(&l.text);
                parts[0].full.push_back(&l);
            }
        } else {
            // classic logrotate shape: current file, previous day, and one
            // gzipped archive holding everything older
            const UsecTime last_day = inst.start + static_cast<UsecTime>(inst.days() - 1) *
                                                       timeutil::usec_per_day;
            const UsecTime prev_day = last_day - timeutil::usec_per_day;
            parts.push_back({base + ".2.gz", true, {}, {}});
            parts.push_back({base + ".1", false, {}, {}});
            parts.push_back({base, false, {}, {}});
            for (const auto& l : buf.lines) {
                std::size_t slot = l.ts >= last_day ? 2 : (l.ts >= prev_day ? 1 : 0);
                parts[slot].lines.push_back(&l.text);
                parts[slot].full.push_back(&l);
            }
        }

        for (const auto& part : parts) {
            std::string content = join_lines(part.lines);
            if (part.gz) content = hashio::gzip_compress(content);
            write_text(root_ / part.path, content);
            std::size_t line_no = 0;
            for (const auto* l : part.full) prov.emplace_back(part.path, ++line_no, l->tag);
        }
    }

    write_text(root_ / "config" / "instance.txt", model::canonical_instance_text(inst));

    if (!publish_) {
        std::sort(prov.begin(), prov.end());
        std::string content;
        for (const auto& [file, line, tag] : prov) {
            nlohmann::json rec{{"file", file}, {"line", line}, {"tag", tag}};
            content += rec.dump();
            content += '\n';
        }
        write_text(root_ / "provenance.ndjson", content);
    }
}

void SinkSet::flush(const model::ScenarioInstance& inst) {
    try {
        flush_inner(inst);
    } catch (...) {
        std::error_code ec;
        fs::create_directories(root_, ec);
        std::ofstream marker(root_ / "INCOMPLETE");
        marker << "dataset write aborted; contents are partial\n";
        throw;
    }
}

} // namespace logbed::logsynth
