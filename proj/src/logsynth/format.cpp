#include "logbed/logsynth/format.hpp"

#include <cctype>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "logbed/core/errors.hpp"
#include "logbed/core/text.hpp"

namespace logbed::logsynth {

namespace tu = logbed::timeutil;
using nlohmann::json;

const char* format_id(Format f) {
    switch (f) {
        case Format::ApacheAccess:  return "apache-access";
        case Format::ApacheError:   return "apache-error";
        case Format::SyslogAuth:    return "syslog-auth";
        case Format::DnsQuery:      return "dns-query";
        case Format::AuditKv:       return "audit-kv";
        case Format::MonitoringCsv: return "monitoring-csv";
        case Format::Vpn:           return "vpn";
        case Format::Mail:          return "mail";
        case Format::Horde:         return "horde";
        case Format::Trace:         return "trace";
    }
    return "?";
}

std::optional<Format> format_from_id(std::string_view id) {
    for (Format f : {Format::ApacheAccess, Format::ApacheError, Format::SyslogAuth,
                     Format::DnsQuery, Format::AuditKv, Format::MonitoringCsv, Format::Vpn,
                     Format::Mail, Format::Horde, Format::Trace})
        if (id == format_id(f)) return f;
    return std::nullopt;
}

const std::string* ParsedLine::find(std::string_view key) const {
    for (const auto& f : fields)
        if (f.key == key) return &f.value;
    return nullptr;
}

const std::string& ParsedLine::get(std::string_view key) const {
    if (const auto* v = find(key)) return *v;
    throw ValidationError("missing field: " + std::string(key));
}

void ParsedLine::set(std::string_view key, std::string value) {
    for (auto& f : fields) {
        if (f.key == key) {
            f.value = std::move(value);
            return;
        }
    }
    fields.push_back({std::string(key), std::move(value)});
}

namespace {

// Cursor over one line. All grammars here are strict: a single wrong byte
// fails the parse and the line is kept raw-only.
struct Cur {
    std::string_view s;
    std::size_t pos = 0;

    bool done() const { return pos >= s.size(); }
    std::string_view rest() const { return s.substr(pos); }

    bool lit(std::string_view w) {
        if (s.substr(pos, w.size()) != w) return false;
        pos += w.size();
        return true;
    }

    // Token up to the next space (or end). Empty tokens fail.
    bool token(std::string& out) {
        const std::size_t start = pos;
        while (pos < s.size() && s[pos] != ' ') ++pos;
        if (pos == start) return false;
        out = s.substr(start, pos - start);
        return true;
    }

    bool take(std::size_t n, std::string_view& out) {
        if (pos + n > s.size()) return false;
        out = s.substr(pos, n);
        pos += n;
        return true;
    }

    bool until(char stop, std::string& out) {
        const std::size_t hit = s.find(stop, pos);
        if (hit == std::string_view::npos) return false;
        out = s.substr(pos, hit - pos);
        pos = hit;
        return true;
    }
};

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

bool looks_like_ip_port(std::string_view s) {
    const auto colon = s.rfind(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 >= s.size()) return false;
    if (!all_digits(s.substr(colon + 1))) return false;
    for (char c : s.substr(0, colon))
        if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.') return false;
    return s.find('.') < colon;
}

bool looks_like_queue_id(std::string_view s) {
    // e.g. 1n8aBc-0007qA-3x
    if (s.size() != 16 || s[6] != '-' || s[13] != '-') return false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i == 6 || i == 13) continue;
        if (!std::isalnum(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

// ---- apache-access ---------------------------------------------------------

ParsedLine parse_access(std::string_view line) {
    ParsedLine ev;
    Cur c{line};
    std::string client, user, status, bytes;
    if (!c.token(client) || !c.lit(" - ")) return ev;
    if (!c.token(user) || !c.lit(" [")) return ev;
    std::string_view stamp;
    if (!c.take(26, stamp)) return ev;
    auto ts = tu::parse_apache_clf_stamp(stamp);
    if (!ts || !c.lit("] \"")) return ev;
    std::string req;
    if (!c.until('"', req)) return ev;
    auto parts = text::split(req, ' ');
    if (parts.size() != 3) return ev;
    if (!c.lit("\" ")) return ev;
    if (!c.token(status) || !all_digits(status)) return ev;
    if (!c.lit(" ")) return ev;
    if (!c.token(bytes) || !all_digits(bytes)) return ev;
    if (!c.lit(" \"")) return ev;
    std::string referer;
    if (!c.until('"', referer) || !c.lit("\" \"")) return ev;
    std::string agent;
    if (!c.until('"', agent) || !c.lit("\"")) return ev;
    if (!c.done()) return ev;
    ev.ok = true;
    ev.ts = *ts;
    ev.fields = {{"client", client}, {"user", user},     {"method", parts[0]},
                 {"path", parts[1]}, {"proto", parts[2]}, {"status", status},
                 {"bytes", bytes},   {"referer", referer}, {"agent", agent}};
    return ev;
}

std::string render_access(const ParsedLine& ev) {
    return ev.get("client") + " - " + ev.get("user") + " [" + tu::apache_clf_stamp(ev.ts) +
           "] \"" + ev.get("method") + " " + ev.get("path") + " " + ev.get("proto") + "\" " +
           ev.get("status") + " " + ev.get("bytes") + " \"" + ev.get("referer") + "\" \"" +
           ev.get("agent") + "\"";
}

// ---- apache-error ----------------------------------------------------------

ParsedLine parse_error(std::string_view line) {
    ParsedLine ev;
    Cur c{line};
    if (!c.lit("[")) return ev;
    std::string_view stamp;
    if (!c.take(31, stamp)) return ev;
    auto ts = tu::parse_apache_error_stamp(stamp);
    if (!ts || !c.lit("] [")) return ev;
    std::string modlevel;
    if (!c.until(']', modlevel)) return ev;
    auto ml = text::split(modlevel, ':');
    if (ml.size() != 2) return ev;
    if (!c.lit("] [pid ")) return ev;
    std::string pid;
    if (!c.until(']', pid) || !all_digits(pid)) return ev;
    if (!c.lit("] [client ")) return ev;
    std::string client;
    if (!c.until(']', client) || !looks_like_ip_port(client)) return ev;
    if (!c.lit("] ")) return ev;
    ev.ok = true;
    ev.ts = *ts;
    ev.fields = {{"module", ml[0]},  {"level", ml[1]}, {"pid", pid},
                 {"client", client}, {"message", std::string(c.rest())}};
    return ev;
}

std::string render_error(const ParsedLine& ev) {
    return "[" + tu::apache_error_stamp(ev.ts) + "] [" + ev.get("module") + ":" +
           ev.get("level") + "] [pid " + ev.get("pid") + "] [client " + ev.get("client") +
           "] " + ev.get("message");
}

// ---- syslog ----------------------------------------------------------------

ParsedLine parse_syslog(std::string_view line, int year) {
    ParsedLine ev;
    Cur c{line};
    std::string_view stamp;
    if (!c.take(15, stamp)) return ev;
    auto ts = tu::parse_syslog_stamp(stamp, year);
    if (!ts || !c.lit(" ")) return ev;
    std::string host, tag;
    if (!c.token(host) || !c.lit(" ")) return ev;
    if (!c.until(':', tag) || tag.empty() || tag.find(' ') != std::string::npos) return ev;
    if (!c.lit(": ")) return ev;
    std::string proc = tag, pid;
    if (const auto br = tag.find('['); br != std::string::npos) {
        if (tag.back() != ']') return ev;
        proc = tag.substr(0, br);
        pid = tag.substr(br + 1, tag.size() - br - 2);
        if (!all_digits(pid) || proc.empty()) return ev;
    }
    ev.ok = true;
    ev.ts = *ts;
    ev.fields = {{"host", host}, {"proc", proc}};
    if (!pid.empty()) ev.fields.push_back({"pid", pid});
    ev.fields.push_back({"message", std::string(c.rest())});
    return ev;
}

std::string render_syslog(const ParsedLine& ev) {
    std::string tag = ev.get("proc");
    if (const auto* pid = ev.find("pid")) tag += "[" + *pid + "]";
    return tu::syslog_stamp(ev.ts) + " " + ev.get("host") + " " + tag + ": " +
           ev.get("message");
}

// ---- dns -------------------------------------------------------------------

ParsedLine parse_dns(std::string_view line, int year) {
    ParsedLine base = parse_syslog(line, year);
    if (!base.ok || base.get("proc") != "dnsmasq" || !base.find("pid")) return {};
    const std::string msg = base.get("message");
    ParsedLine ev;
    ev.ts = base.ts;
    ev.fields = {{"host", base.get("host")}, {"pid", base.get("pid")}};
    Cur c{msg};
    if (c.lit("query[")) {
        std::string qtype, name, client;
        if (!c.until(']', qtype) || !c.lit("] ")) return {};
        if (!c.token(name) || !c.lit(" from ")) return {};
        if (!c.token(client) || !c.done()) return {};
        ev.set("op", "query");
        ev.set("qtype", qtype);
        ev.set("name", name);
        ev.set("client", client);
    } else if (c.lit("reply ")) {
        std::string name, result;
        if (!c.token(name) || !c.lit(" is ")) return {};
        if (!c.token(result) || !c.done()) return {};
        ev.set("op", "reply");
        ev.set("name", name);
        ev.set("result", result);
    } else if (c.lit("forwarded ")) {
        std::string name, upstream;
        if (!c.token(name) || !c.lit(" to ")) return {};
        if (!c.token(upstream) || !c.done()) return {};
        ev.set("op", "forwarded");
        ev.set("name", name);
        ev.set("upstream", upstream);
    } else {
        return {};
    }
    ev.ok = true;
    return ev;
}

std::string render_dns(const ParsedLine& ev) {
    const std::string& op = ev.get("op");
    std::string msg;
    if (op == "query")
        msg = "query[" + ev.get("qtype") + "] " + ev.get("name") + " from " + ev.get("client");
    else if (op == "reply")
        msg = "reply " + ev.get("name") + " is " + ev.get("result");
    else if (op == "forwarded")
        msg = "forwarded " + ev.get("name") + " to " + ev.get("upstream");
    else
        throw ValidationError("unknown dns op: " + op);
    ParsedLine sys;
    sys.ts = ev.ts;
    sys.fields = {{"host", ev.get("host")},
                  {"proc", "dnsmasq"},
                  {"pid", ev.get("pid")},
                  {"message", msg}};
    return render_syslog(sys);
}

// ---- audit -----------------------------------------------------------------

bool audit_key_quoted(std::string_view key) {
    if (key == "comm" || key == "exe" || key == "key" || key == "acct") return true;
    return key.size() >= 2 && key[0] == 'a' && all_digits(key.substr(1));
}

ParsedLine parse_audit(std::string_view line) {
    ParsedLine ev;
    Cur c{line};
    if (!c.lit("type=")) return ev;
    std::string type;
    if (!c.token(type) || !c.lit(" msg=audit(")) return ev;
    std::string stamp;
    if (!c.until(':', stamp)) return ev;
    auto ts = tu::parse_epoch_millis(stamp);
    if (!ts || !c.lit(":")) return ev;
    std::string serial;
    if (!c.until(')', serial) || !all_digits(serial)) return ev;
    if (!c.lit("): ")) return ev;
    ev.ts = *ts;
    ev.fields = {{"type", type}, {"serial", serial}};
    while (!c.done()) {
        std::string key;
        if (!c.until('=', key) || key.empty() || key.find(' ') != std::string::npos) return {};
        if (!c.lit("=")) return {};
        std::string value;
        if (audit_key_quoted(key)) {
            if (!c.lit("\"")) return {};
            if (!c.until('"', value)) return {};
            if (!c.lit("\"")) return {};
        } else {
            // unquoted: to next space
            while (!c.done() && c.s[c.pos] != ' ') value += c.s[c.pos++];
            if (value.empty()) return {};
        }
        ev.fields.push_back({key, value});
        if (!c.done() && !c.lit(" ")) return {};
    }
    if (ev.fields.size() < 3) return {};
    ev.ok = true;
    return ev;
}

std::string render_audit(const ParsedLine& ev) {
    if (ev.fields.size() < 3 || ev.fields[0].key != "type" || ev.fields[1].key != "serial")
        throw ValidationError("audit record needs type, serial, and payload fields");
    std::string out = "type=" + ev.fields[0].value + " msg=audit(" + tu::epoch_millis(ev.ts) +
                      ":" + ev.fields[1].value + "):";
    for (std::size_t i = 2; i < ev.fields.size(); ++i) {
        const auto& [k, v] = ev.fields[i];
        out += " " + k + "=";
        if (audit_key_quoted(k))
            out += "\"" + v + "\"";
        else
            out += v;
    }
    return out;
}

// ---- monitoring ------------------------------------------------------------

constexpr const char* kMetricCols[] = {"cpu_system", "cpu_user", "cpu_total", "mem_used",
                                       "mem_free",   "disk",     "net_in",    "net_out"};

ParsedLine parse_metrics(std::string_view line) {
    ParsedLine ev;
    auto cols = text::split(line, ',');
    if (cols.size() != 9) return ev;
    auto ts = tu::parse_iso_seconds(cols[0]);
    if (!ts) return ev;
    for (std::size_t i = 1; i < cols.size(); ++i) {
        if (cols[i].empty()) return ev;
        for (char ch : cols[i])
            if (!std::isdigit(static_cast<unsigned char>(ch)) && ch != '.' && ch != '-')
                return ev;
        ev.fields.push_back({kMetricCols[i - 1], cols[i]});
    }
    ev.ok = true;
    ev.ts = *ts;
    return ev;
}

std::string render_metrics(const ParsedLine& ev) {
    std::string out = tu::iso_seconds(ev.ts);
    for (const char* col : kMetricCols) out += "," + ev.get(col);
    return out;
}

// ---- vpn -------------------------------------------------------------------

ParsedLine parse_vpn(std::string_view line) {
    ParsedLine ev;
    Cur c{line};
    std::string_view stamp;
    if (!c.take(24, stamp)) return ev;
    auto ts = tu::parse_openvpn_stamp(stamp);
    if (!ts || !c.lit(" ")) return ev;
    ev.ts = *ts;
    Cur probe = c;
    std::string client;
    if (probe.token(client) && looks_like_ip_port(client) && probe.lit(" [")) {
        std::string user;
        if (!probe.until(']', user) || user.empty() || user.find(' ') != std::string::npos)
            return {};
        if (!probe.lit("] ")) return {};
        ev.fields = {{"client", client}, {"user", user}, {"message", std::string(probe.rest())}};
    } else {
        // daemon-level line, no peer
        ev.fields = {{"message", std::string(c.rest())}};
        if (ev.fields[0].value.empty() ||
            !std::isalpha(static_cast<unsigned char>(ev.fields[0].value[0])))
            return {};
    }
    ev.ok = true;
    return ev;
}

std::string render_vpn(const ParsedLine& ev) {
    std::string out = tu::openvpn_stamp(ev.ts) + " ";
    if (const auto* client = ev.find("client"))
        out += *client + " [" + ev.get("user") + "] ";
    return out + ev.get("message");
}

// ---- mail ------------------------------------------------------------------

ParsedLine parse_mail(std::string_view line) {
    ParsedLine ev;
    Cur c{line};
    std::string_view stamp;
    if (!c.take(19, stamp)) return ev;
    auto ts = tu::parse_iso_seconds(stamp);
    if (!ts || !c.lit(" ")) return ev;
    ev.ts = *ts;
    Cur probe = c;
    std::string id;
    if (!probe.token(id) || !looks_like_queue_id(id)) {
        ev.fields = {{"op", "daemon"}, {"message", std::string(c.rest())}};
        ev.ok = !ev.fields[1].value.empty();
        return ev;
    }
    ev.fields = {{"id", id}};
    if (probe.done()) return {};
    if (!probe.lit(" ")) return {};
    if (probe.lit("<= ")) {
        std::string addr, helo, ip, size, mid;
        if (!probe.token(addr) || !probe.lit(" H=")) return {};
        if (!probe.token(helo) || !probe.lit(" [")) return {};
        if (!probe.until(']', ip) || !probe.lit("] S=")) return {};
        if (!probe.token(size) || !all_digits(size) || !probe.lit(" id=")) return {};
        if (!probe.token(mid) || !probe.done()) return {};
        ev.set("op", "arrival");
        ev.set("addr", addr);
        ev.set("helo", helo);
        ev.set("ip", ip);
        ev.set("size", size);
        ev.set("mid", mid);
    } else if (probe.lit("=> ")) {
        std::string addr, router, transport, mx, ip, size;
        if (!probe.token(addr) || !probe.lit(" R=")) return {};
        if (!probe.token(router) || !probe.lit(" T=")) return {};
        if (!probe.token(transport) || !probe.lit(" H=")) return {};
        if (!probe.token(mx) || !probe.lit(" [")) return {};
        if (!probe.until(']', ip) || !probe.lit("] S=")) return {};
        if (!probe.token(size) || !all_digits(size) || !probe.done()) return {};
        ev.set("op", "delivery");
        ev.set("addr", addr);
        ev.set("router", router);
        ev.set("transport", transport);
        ev.set("mx", mx);
        ev.set("ip", ip);
        ev.set("size", size);
    } else if (probe.lit("Completed") && probe.done()) {
        ev.set("op", "completed");
    } else {
        return {};
    }
    ev.ok = true;
    return ev;
}

std::string render_mail(const ParsedLine& ev) {
    std::string out = tu::iso_seconds(ev.ts) + " ";
    const std::string& op = ev.get("op");
    if (op == "daemon") return out + ev.get("message");
    out += ev.get("id") + " ";
    if (op == "arrival")
        return out + "<= " + ev.get("addr") + " H=" + ev.get("helo") + " [" + ev.get("ip") +
               "] S=" + ev.get("size") + " id=" + ev.get("mid");
    if (op == "delivery")
        return out + "=> " + ev.get("addr") + " R=" + ev.get("router") + " T=" +
               ev.get("transport") + " H=" + ev.get("mx") + " [" + ev.get("ip") + "] S=" +
               ev.get("size");
    if (op == "completed") return out + "Completed";
    throw ValidationError("unknown mail op: " + op);
}

// ---- horde -----------------------------------------------------------------

ParsedLine parse_horde(std::string_view line) {
    ParsedLine ev;
    Cur c{line};
    std::string_view stamp;
    if (!c.take(19, stamp)) return ev;
    auto ts = tu::parse_iso_seconds(stamp);
    if (!ts || !c.lit(" HORDE [")) return ev;
    std::string level, app;
    if (!c.until(']', level) || !c.lit("] [")) return ev;
    if (!c.until(']', app) || !c.lit("] ")) return ev;
    if (level.empty() || app.empty() || c.rest().empty()) return ev;
    ev.ok = true;
    ev.ts = *ts;
    ev.fields = {{"level", level}, {"app", app}, {"message", std::string(c.rest())}};
    return ev;
}

std::string render_horde(const ParsedLine& ev) {
    return tu::iso_seconds(ev.ts) + " HORDE [" + ev.get("level") + "] [" + ev.get("app") +
           "] " + ev.get("message");
}

// ---- trace -----------------------------------------------------------------

void flatten_json(const json& j, const std::string& prefix, ParsedLine& ev) {
    for (const auto& [key, value] : j.items()) {
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object())
            flatten_json(value, path, ev);
        else if (value.is_string())
            ev.fields.push_back({path, value.get<std::string>()});
        else
            ev.fields.push_back({path, value.dump()});
    }
}

ParsedLine parse_trace(std::string_view line) {
    ParsedLine ev;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return ev;
    std::optional<tu::UsecTime> ts;
    if (j.contains("time") && j["time"].is_string())
        ts = tu::parse_rfc3339(j["time"].get<std::string>());
    else if (j.contains("start") && j["start"].is_string())
        ts = tu::parse_rfc3339(j["start"].get<std::string>());
    if (!ts) return ev;
    ev.ok = true;
    ev.ts = *ts;
    flatten_json(j, "", ev);
    ev.fields.push_back({"_json", j.dump()});
    return ev;
}

std::string render_trace(const ParsedLine& ev) { return ev.get("_json"); }

} // namespace

ParsedLine parse_line(Format f, std::string_view line, int year) {
    switch (f) {
        case Format::ApacheAccess:  return parse_access(line);
        case Format::ApacheError:   return parse_error(line);
        case Format::SyslogAuth:    return parse_syslog(line, year);
        case Format::DnsQuery:      return parse_dns(line, year);
        case Format::AuditKv:       return parse_audit(line);
        case Format::MonitoringCsv: return parse_metrics(line);
        case Format::Vpn:           return parse_vpn(line);
        case Format::Mail:          return parse_mail(line);
        case Format::Horde:         return parse_horde(line);
        case Format::Trace:         return parse_trace(line);
    }
    return {};
}

std::string render_line(Format f, const ParsedLine& ev) {
    switch (f) {
        case Format::ApacheAccess:  return render_access(ev);
        case Format::ApacheError:   return render_error(ev);
        case Format::SyslogAuth:    return render_syslog(ev);
        case Format::DnsQuery:      return render_dns(ev);
        case Format::AuditKv:       return render_audit(ev);
        case Format::MonitoringCsv: return render_metrics(ev);
        case Format::Vpn:           return render_vpn(ev);
        case Format::Mail:          return render_mail(ev);
        case Format::Horde:         return render_horde(ev);
        case Format::Trace:         return render_trace(ev);
    }
    throw ValidationError("unknown format");
}

} // namespace logbed::logsynth
