#include "logbed/logsynth/lines.hpp"

#include <cstdio>

#include "logbed/core/text.hpp"
#include "logbed/core/time.hpp"

namespace logbed::logsynth::lines {

namespace tu = logbed::timeutil;
using nlohmann::json;

std::string apache_access(UsecTime ts, const std::string& client, const std::string& user,
                          const std::string& method, const std::string& path, int status,
                          std::int64_t bytes, const std::string& referer,
                          const std::string& agent) {
    ParsedLine ev;
    ev.ts = ts;
    ev.fields = {{"client", client},
                 {"user", user},
                 {"method", method},
                 {"path", path},
                 {"proto", "HTTP/1.1"},
                 {"status", std::to_string(status)},
                 {"bytes", std::to_string(bytes)},
                 {"referer", referer},
                 {"agent", agent}};
    return render_line(Format::ApacheAccess, ev);
}

std::string apache_error(UsecTime ts, const std::string& module, const std::string& level,
                         int pid, const std::string& client_ip, int client_port,
                         const std::string& message) {
    ParsedLine ev;
    ev.ts = ts;
    ev.fields = {{"module", module},
                 {"level", level},
                 {"pid", std::to_string(pid)},
                 {"client", client_ip + ":" + std::to_string(client_port)},
                 {"message", message}};
    return render_line(Format::ApacheError, ev);
}

std::string syslog(UsecTime ts, const std::string& host, const std::string& proc, int pid,
                   const std::string& message) {
    ParsedLine ev;
    ev.ts = ts;
    ev.fields = {{"host", host}, {"proc", proc}};
    if (pid > 0) ev.fields.push_back({"pid", std::to_string(pid)});
    ev.fields.push_back({"message", message});
    return render_line(Format::SyslogAuth, ev);
}

std::string sudo_syslog(UsecTime ts, const std::string& host, const std::string& user,
                        const std::string& tty, const std::string& run_as,
                        const std::string& command) {
    char padded[64];
    std::snprintf(padded, sizeof padded, "%8s", user.c_str());
    return syslog(ts, host, "sudo", 0,
                  std::string(padded) + " : TTY=" + tty + " ; USER=" + run_as +
                      " ; COMMAND=" + command);
}

std::string dns_query(UsecTime ts, const std::string& host, int pid, const std::string& qtype,
                      const std::string& name, const std::string& client) {
    ParsedLine ev;
    ev.ts = ts;
    ev.fields = {{"host", host},   {"pid", std::to_string(pid)}, {"op", "query"},
                 {"qtype", qtype}, {"name", name},               {"client", client}};
    return render_line(Format::DnsQuery, ev);
}

std::string dns_reply(UsecTime ts, const std::string& host, int pid, const std::string& name,
                      const std::string& result) {
    ParsedLine ev;
    ev.ts = ts;
    ev.fields = {{"host", host},
                 {"pid", std::to_string(pid)},
                 {"op", "reply"},
                 {"name", name},
                 {"result", result}};
    return render_line(Format::DnsQuery, ev);
}

std::string audit(UsecTime ts, const std::string& type, std::int64_t serial,
                  const std::vector<Field>& kvs) {
    ParsedLine ev;
    ev.ts = ts;
    ev.fields = {{"type", type}, {"serial", std::to_string(serial)}};
    ev.fields.insert(ev.fields.end(), kvs.begin(), kvs.end());
    return render_line(Format::AuditKv, ev);
}

std::string metrics(UsecTime ts, double cpu_system, double cpu_user, double mem_used,
                    double mem_free, double disk, double net_in, double net_out) {
    ParsedLine ev;
    ev.ts = ts;
    ev.fields = {{"cpu_system", text::fixed2(cpu_system)},
                 {"cpu_user", text::fixed2(cpu_user)},
                 {"cpu_total", text::fixed2(cpu_system + cpu_user)},
                 {"mem_used", text::fixed2(mem_used)},
                 {"mem_free", text::fixed2(mem_free)},
                 {"disk", text::fixed2(disk)},
                 {"net_in", text::fixed2(net_in)},
                 {"net_out", text::fixed2(net_out)}};
    return render_line(Format::MonitoringCsv, ev);
}

std::string vpn_peer(UsecTime ts, const std::string& client_ip, int client_port,
                     const std::string& user, const std::string& message) {
    ParsedLine ev;
    ev.ts = ts;
    ev.fields = {{"client", client_ip + ":" + std::to_string(client_port)},
                 {"user", user},
                 {"message", message}};
    return render_line(Format::Vpn, ev);
}

std::string vpn_daemon(UsecTime ts, const std::string& message) {
    ParsedLine ev;
    ev.ts = ts;
    ev.fields = {{"message", message}};
    return render_line(Format::Vpn, ev);
}

std::string mail_arrival(UsecTime ts, const std::string& id, const std::string& addr,
                         const std::string& helo, const std::string& ip, std::int64_t size,
                         const std::string& mid) {
    ParsedLine ev;
    ev.ts = ts;
    ev.fields = {{"id", id},   {"op", "arrival"},                {"addr", addr},
                 {"helo", helo}, {"ip", ip}, {"size", std::to_string(size)}, {"mid", mid}};
    return render_line(Format::Mail, ev);
}

std::string mail_delivery(UsecTime ts, const std::string& id, const std::string& addr,
                          const std::string& router, const std::string& transport,
                          const std::string& mx, const std::string& ip, std::int64_t size) {
    ParsedLine ev;
    ev.ts = ts;
    ev.fields = {{"id", id},         {"op", "delivery"}, {"addr", addr},
                 {"router", router}, {"transport", transport}, {"mx", mx},
                 {"ip", ip},         {"size", std::to_string(size)}};
    return render_line(Format::Mail, ev);
}

std::string mail_completed(UsecTime ts, const std::string& id) {
    ParsedLine ev;
    ev.ts = ts;
    ev.fields = {{"id", id}, {"op", "completed"}};
    return render_line(Format::Mail, ev);
}

std::string mail_daemon(UsecTime ts, const std::string& message) {
    ParsedLine ev;
    ev.ts = ts;
    ev.fields = {{"op", "daemon"}, {"message", message}};
    return render_line(Format::Mail, ev);
}

std::string horde(UsecTime ts, const std::string& level, const std::string& app,
                  const std::string& message) {
    ParsedLine ev;
    ev.ts = ts;
    ev.fields = {{"level", level}, {"app", app}, {"message", message}};
    return render_line(Format::Horde, ev);
}

std::string trace_step(UsecTime ts, const std::string& machine, const std::string& from,
                       const std::string& to, const std::string& action) {
    json j = {{"time", tu::rfc3339(ts)},
              {"machine", machine},
              {"from", from},
              {"to", to},
              {"action", action}};
    return j.dump();
}

std::string attack_record(UsecTime start, UsecTime end, const std::string& step,
                          const nlohmann::json& facts) {
    json j = {{"start", tu::rfc3339(start)},
              {"end", tu::rfc3339(end)},
              {"step", step},
              {"facts", facts}};
    return j.dump();
}

std::string queue_id(std::uint64_t n) {
    static const char* alphabet = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    auto enc = [&](std::uint64_t v, int width) {
        std::string out(width, '0');
        for (int i = width - 1; i >= 0; --i) {
            out[i] = alphabet[v % 62];
            v /= 62;
        }
        return out;
    };
    return enc(0x1000000 + n * 7919, 6) + "-" + enc(n, 6) + "-" + enc(n % 3844, 2);
}

} // namespace logbed::logsynth::lines
