#pragma once

// Minimal CSV helpers shared by the serialisers. Fields never contain commas
// or quotes in any of the formats written here.

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace blindinv::detail {

std::vector<std::string> split(std::string_view line, char sep);
std::string trim(std::string_view s);

/// Reads a CSV stream whose first non-comment line must equal `header`.
/// Lines starting with '#' are skipped.
std::vector<std::vector<std::string>> read_csv(std::istream& is, const std::vector<std::string>& header);

double parse_double(const std::string& s);
std::size_t parse_size(const std::string& s);

}  // namespace blindinv::detail
