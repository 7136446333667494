#pragma once

#include "bgkit/point.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bgkit::detail {

inline std::int64_t parse_int(std::string_view s) {
  try {
    std::size_t used = 0;
    std::string str(s);
    long long v = std::stoll(str, &used);
    if (used != str.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed integer in point literal: " + std::string(s));
  }
}

// "[1,-2,3]" -> {1,-2,3}
inline std::vector<std::int64_t> parse_int_list(std::string_view s) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw std::invalid_argument("expected [a,b,...] in point literal: " + std::string(s));
  s = s.substr(1, s.size() - 2);
  std::vector<std::int64_t> out;
  while (!s.empty()) {
    auto comma = s.find(',');
    out.push_back(parse_int(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

inline bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

}  // namespace bgkit::detail
