#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace pvseg {

// Shortest decimal that parses back to the same double; "-0" is written as "0".
std::string format_double(double value);

// Whole-string parse; nullopt on trailing garbage or empty input.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace pvseg
