#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cubictwist {

// Shortest decimal text that parses back to the same double.
std::string format_real(double value);
double parse_real(std::string_view text);
std::uint64_t parse_uint(std::string_view text);
std::int64_t parse_int(std::string_view text);

std::vector<std::string_view> split(std::string_view line, char sep);

// FNV-1a 64-bit digest, rendered as 16 hex digits.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t value);

// Write to a sibling temporary file and rename over the target.
void atomic_write(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace cubictwist
