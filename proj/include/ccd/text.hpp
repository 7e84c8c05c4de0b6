#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace ccd {

std::string trim(std::string_view s);

// Whole-token decimal number; throws ConfigError(line, column) otherwise.
double parse_number(std::string_view tok, std::size_t line, std::size_t column = 1);

// A number or a multiple of pi: "1.5", "pi", "-pi/2", "0.5pi", "3pi/4".
double parse_angle(std::string_view tok, std::size_t line, std::size_t column = 1);

// Shortest decimal string that parses back to exactly v.
std::string format_number(double v);

}  // namespace ccd
