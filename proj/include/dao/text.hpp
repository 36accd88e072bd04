#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dao {

// 64-bit FNV-1a, rendered as 16 lowercase hex digits. Used for transcript
// prompt digests and for naming messages in error reports.
std::string digest(std::string_view text);
std::uint64_t fnv1a(std::string_view text, std::uint64_t seed = 14695981039346656037ULL);

std::vector<std::string> split_whitespace(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string trim(std::string_view text);
std::string to_lower(std::string_view text);
bool contains_ci(std::string_view haystack, std::string_view needle);
std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace dao
