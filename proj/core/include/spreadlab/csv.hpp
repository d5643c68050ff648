#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spreadlab::csv {

// Shortest round-trip representation; output is identical across runs.
std::string format_double(double v);

std::vector<std::string_view> split(std::string_view line, char sep = ',');
std::string_view trim(std::string_view s) noexcept;

// Full-field numeric parses; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view s) noexcept;
std::optional<long long> parse_int(std::string_view s) noexcept;

// Prefixes every line of `text` with "# ".
std::string comment_block(std::string_view text);

}  // namespace spreadlab::csv
