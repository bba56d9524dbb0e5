#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hmorrey {

std::vector<std::string> split(std::string_view text, char sep);
std::string trim(std::string_view text);

// Strict numeric parsing; throws InputError mentioning `what`.
double parse_double(std::string_view text, std::string_view what);
long parse_long(std::string_view text, std::string_view what);
std::vector<double> parse_doubles(std::string_view text, char sep, std::string_view what);

// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace hmorrey
