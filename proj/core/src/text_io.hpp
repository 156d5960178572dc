#pragma once

// Line tokenizer and number parsing shared by the text formats.

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "ccsolid/types.hpp"

namespace ccsolid::detail {

struct Line {
  int number;
  std::vector<std::string_view> tokens;
};

inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    pos = end + 1;
    const auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || raw[first] == '#') {
      if (end == text.size()) break;
      continue;
    }
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t' && raw[j] != '\r') ++j;
      if (j > i) line.tokens.push_back(raw.substr(i, j - i));
      i = j;
    }
    lines.push_back(std::move(line));
    if (end == text.size()) break;
  }
  return lines;
}

template <class T>
T parse_number(std::string_view token, int line) {
  T value{};
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  if (!token.empty() && token.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("cannot parse '" + std::string(token) + "' as a number", line);
  }
  return value;
}

}  // namespace ccsolid::detail
