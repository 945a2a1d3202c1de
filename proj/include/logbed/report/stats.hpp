#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace logbed::report {

// One day of resolver traffic on the firewall. background excludes queries
// for the exfiltration staging domain so the figure reflects ordinary use.
struct DnsDay {
    std::string date;
    std::size_t total = 0;
    std::size_t background = 0;
};

struct StatsReport {
    std::vector<DnsDay> dns_days;
    double dns_mean = 0; // of background counts
    double dns_std = 0;  // population
    bool single_day = false;

    // queried org service (or "external") -> events per hour of day
    std::map<std::string, std::array<std::size_t, 24>> dns_hourly;
    // host -> "YYYY-MM-DD HH" -> request count
    std::map<std::string, std::map<std::string, std::size_t>> access_hourly;
    // label -> "YYYY-MM-DD HH" -> labeled lines; empty when labels/ absent
    std::map<std::string, std::map<std::string, std::size_t>> label_hourly;

    std::string render() const;
    std::string csv() const;
};

// Walks a dataset tree and computes the activity summaries. Throws
// ValidationError when the resolver log is missing.
StatsReport compute_stats(const std::filesystem::path& dataset_root);

} // namespace logbed::report
