#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace logbed::hashio {

std::string sha256_hex(std::string_view bytes);
std::string sha256_file_hex(const std::filesystem::path& path);

// zlib stream compression (deflate with zlib header), used both for the
// rotated-log fixtures and for the optional exfil payload compression.
std::string zlib_compress(std::string_view bytes);
std::string zlib_decompress(std::string_view bytes);

// gzip-framed variants for `.gz` rotation files.
std::string gzip_compress(std::string_view bytes);
std::string gzip_decompress(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

} // namespace logbed::hashio
