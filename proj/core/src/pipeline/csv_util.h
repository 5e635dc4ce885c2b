#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "scenestat/error.h"

namespace scenestat::pipeline::detail {

// Shortest decimal that round-trips to the same double.
inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

template <typename T>
T parse_field(std::string_view s, std::size_t line) {
  T v{};
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
    throw ParseError("invalid number '" + std::string(s) + "'", line, ParseError::Unit::kLine);
  }
  return v;
}

}  // namespace scenestat::pipeline::detail
