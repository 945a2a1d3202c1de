#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "logbed/logsynth/format.hpp"

// Builders for every concrete line shape the generator emits. Each goes
// through render_line so the emitting and parsing grammars cannot drift.
namespace logbed::logsynth::lines {

using timeutil::UsecTime;

std::string apache_access(UsecTime ts, const std::string& client, const std::string& user,
                          const std::string& method, const std::string& path, int status,
                          std::int64_t bytes, const std::string& referer,
                          const std::string& agent);

std::string apache_error(UsecTime ts, const std::string& module, const std::string& level,
                         int pid, const std::string& client_ip, int client_port,
                         const std::string& message);

std::string syslog(UsecTime ts, const std::string& host, const std::string& proc, int pid,
                   const std::string& message); // pid <= 0 omits the bracket
// sudo logs the invoking user right-justified to eight columns
std::string sudo_syslog(UsecTime ts, const std::string& host, const std::string& user,
                        const std::string& tty, const std::string& run_as,
                        const std::string& command);

std::string dns_query(UsecTime ts, const std::string& host, int pid, const std::string& qtype,
                      const std::string& name, const std::string& client);
std::string dns_reply(UsecTime ts, const std::string& host, int pid, const std::string& name,
                      const std::string& result);

std::string audit(UsecTime ts, const std::string& type, std::int64_t serial,
                  const std::vector<Field>& kvs);

std::string metrics(UsecTime ts, double cpu_system, double cpu_user, double mem_used,
                    double mem_free, double disk, double net_in, double net_out);

std::string vpn_peer(UsecTime ts, const std::string& client_ip, int client_port,
                     const std::string& user, const std::string& message);
std::string vpn_daemon(UsecTime ts, const std::string& message);

std::string mail_arrival(UsecTime ts, const std::string& id, const std::string& addr,
                         const std::string& helo, const std::string& ip, std::int64_t size,
                         const std::string& mid);
std::string mail_delivery(UsecTime ts, const std::string& id, const std::string& addr,
                          const std::string& router, const std::string& transport,
                          const std::string& mx, const std::string& ip, std::int64_t size);
std::string mail_completed(UsecTime ts, const std::string& id);
std::string mail_daemon(UsecTime ts, const std::string& message);

std::string horde(UsecTime ts, const std::string& level, const std::string& app,
                  const std::string& message);

std::string trace_step(UsecTime ts, const std::string& machine, const std::string& from,
                       const std::string& to, const std::string& action);
std::string attack_record(UsecTime start, UsecTime end, const std::string& step,
                          const nlohmann::json& facts);

// Deterministic exim-style queue id derived from a counter.
std::string queue_id(std::uint64_t n);

} // namespace logbed::logsynth::lines
