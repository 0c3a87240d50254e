#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ohmscope {

// Shortest decimal that parses back to the same double.
std::string format_double(double value);

// Strict parsers: whole token must convert. Throw the error built by fail().
double parse_double(const std::string& token, const std::string& what);
long long parse_integer(const std::string& token, const std::string& what);

std::vector<std::string> split(const std::string& line, char sep);
std::string trim(const std::string& s);

// Non-fatal diagnostics go to stderr so stdout stays machine-readable.
void log_warning(const std::string& message);

}  // namespace ohmscope
