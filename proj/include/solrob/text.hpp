#ifndef SOLROB_TEXT_HPP
#define SOLROB_TEXT_HPP

#include <cctype>
#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace solrob::text {

/// Whitespace-separated tokens with 1-based columns; "#"-comments removed
/// when `hash_comments` is set.
inline std::vector<std::pair<std::string, std::size_t>> tokenize(std::string line, bool hash_comments) {
  if (hash_comments) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
  }
  std::vector<std::pair<std::string, std::size_t>> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.push_back({line.substr(i, j - i), i + 1});
    i = j;
  }
  return out;
}

inline std::optional<long long> parse_integer(const std::string& tok) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(tok, &used);
    if (used != tok.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace solrob::text

#endif  // SOLROB_TEXT_HPP
