#ifndef BULLYSCOPE_TEXT_HPP
#define BULLYSCOPE_TEXT_HPP

#include <string>
#include <string_view>
#include <vector>

namespace bullyscope {

namespace detail {

// Bytes >= 0x80 (UTF-8 sequences) count as word characters so non-ASCII
// words and emoji survive edge stripping intact.
inline bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c >= 0x80;
}

inline bool is_space_byte(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace detail

/// Lowercases, splits on whitespace, and strips non-alphanumeric characters
/// from both ends of each token. "@user" and "#tag" reduce to "user" and
/// "tag"; tokens with nothing left are dropped. Interior punctuation
/// ("don't", "a.b") is kept.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() &&
           detail::is_space_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    std::size_t start = i;
    while (i < text.size() &&
           !detail::is_space_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    std::size_t end = i;
    while (start < end &&
           !detail::is_word_byte(static_cast<unsigned char>(text[start]))) {
      ++start;
    }
    while (end > start &&
           !detail::is_word_byte(static_cast<unsigned char>(text[end - 1]))) {
      --end;
    }
    if (start == end) continue;
    std::string token(text.substr(start, end - start));
    for (char& c : token) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

inline std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && detail::is_space_byte(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && detail::is_space_byte(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace bullyscope

#endif  // BULLYSCOPE_TEXT_HPP
