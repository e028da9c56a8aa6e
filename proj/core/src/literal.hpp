#pragma once

// Helpers for the bracketed number lists used by address and polynomial literals.

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "escort/error.hpp"

namespace escort::detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// "[a, b, c]" -> {"a", "b", "c"}; "[]" -> {}.
inline std::vector<std::string_view> split_list(std::string_view s) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw Error(ErrorKind::Parse, "expected bracketed list, got '" + std::string(s) + "'");
  s = trim(s.substr(1, s.size() - 2));
  std::vector<std::string_view> out;
  if (s.empty()) return out;
  while (true) {
    auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <typename Int>
Int parse_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  Int value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorKind::Parse, "not an integer: '" + std::string(s) + "'");
  return value;
}

inline long double parse_real(std::string_view s) {
  s = trim(s);
  std::string buf(s);
  std::size_t used = 0;
  long double value = 0;
  try {
    value = std::stold(buf, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "not a number: '" + buf + "'");
  }
  if (used != buf.size()) throw Error(ErrorKind::Parse, "not a number: '" + buf + "'");
  return value;
}

}  // namespace escort::detail
