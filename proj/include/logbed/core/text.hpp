#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace logbed::text {

std::string base64_encode(std::string_view bytes);
std::optional<std::string> base64_decode(std::string_view b64);

std::string to_hex(const unsigned char* data, std::size_t n);

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);

std::string lower(std::string_view s);

// Fixed-point rendering with exactly two decimals, used by the metric rows.
std::string fixed2(double v);

std::optional<std::int64_t> to_int(std::string_view s);

} // namespace logbed::text
