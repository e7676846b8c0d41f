#pragma once

// Small helpers for the deterministic text outputs (CSV rows, headers).

#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace holo::text {

/// Shortest-round-trip-safe rendering (17 significant digits).
inline std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Fixed-precision rendering for human-facing summaries.
inline std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Prefixes every line of a block with "## ".
inline std::string comment_block(std::string_view block) {
  std::string out;
  std::size_t start = 0;
  while (start < block.size()) {
    auto pos = block.find('\n', start);
    if (pos == std::string_view::npos) pos = block.size();
    out += "## ";
    out += block.substr(start, pos - start);
    out += '\n';
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& s, std::string_view what);

}  // namespace holo::text
