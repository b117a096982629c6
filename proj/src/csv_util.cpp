#include "csv_util.hpp"

#include <cerrno>
#include <cstdlib>

#include "blindinv/error.hpp"

namespace blindinv::detail {

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::vector<std::string>> read_csv(std::istream& is, const std::vector<std::string>& header) {
  std::string line;
  bool seen_header = false;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, ',');
    if (!seen_header) {
      if (fields != header) throw Error(ErrorCode::ParseError, "unexpected CSV header: " + line);
      seen_header = true;
      continue;
    }
    if (fields.size() != header.size()) throw Error(ErrorCode::ParseError, "wrong field count: " + line);
    rows.push_back(std::move(fields));
  }
  if (!seen_header) throw Error(ErrorCode::ParseError, "missing CSV header");
  return rows;
}

double parse_double(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) throw Error(ErrorCode::ParseError, "empty number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) throw Error(ErrorCode::ParseError, "bad number '" + t + "'");
  return v;
}

std::size_t parse_size(const std::string& s) {
  const std::string t = trim(s);
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (t.empty() || t[0] == '-' || end != t.c_str() + t.size() || errno == ERANGE) {
    throw Error(ErrorCode::ParseError, "bad integer '" + t + "'");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace blindinv::detail
