#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logbed/core/time.hpp"

namespace logbed::logsynth {

// Line grammars understood by the generator and the label engine. Every
// format can be rendered from parsed fields and parsed back losslessly;
// render(parse(line)) reproduces the original line byte for byte.
enum class Format {
    ApacheAccess,   // combined access log
    ApacheError,
    SyslogAuth,     // classic BSD syslog (auth.log, syslog, kernel, ...)
    DnsQuery,       // dnsmasq-style query/reply/forwarded lines
    AuditKv,        // auditd key=value records
    MonitoringCsv,  // fixed-column metric rows
    Vpn,            // OpenVPN-style daemon log
    Mail,           // exim-style transaction log
    Horde,          // webmail application log
    Trace,          // ndjson state machine / attack step records
};

const char* format_id(Format f);
std::optional<Format> format_from_id(std::string_view id);

struct Field {
    std::string key;
    std::string value;
};

struct ParsedLine {
    bool ok = false;
    timeutil::UsecTime ts = 0;
    std::vector<Field> fields; // declaration order matters for re-rendering

    const std::string* find(std::string_view key) const;
    // Throws ValidationError when the key is missing.
    const std::string& get(std::string_view key) const;
    void set(std::string_view key, std::string value);
};

// `year` disambiguates stamps that do not carry one (syslog, dns).
ParsedLine parse_line(Format f, std::string_view line, int year);

// Inverse of parse_line. Throws ValidationError if required fields are
// missing or malformed.
std::string render_line(Format f, const ParsedLine& ev);

} // namespace logbed::logsynth
