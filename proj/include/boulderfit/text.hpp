#pragma once

// Small text helpers shared by the file formats.

#include <string>
#include <string_view>
#include <vector>

namespace boulderfit::text {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

// Strict parse of a whole field; returns false on trailing garbage or overflow.
bool parse_double(std::string_view field, double& out);
bool parse_int(std::string_view field, long long& out);

std::vector<std::string> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

// Strips a trailing '\r' so CRLF files read the same as LF files.
std::string_view chomp(std::string_view line);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace boulderfit::text
