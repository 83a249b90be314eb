#ifndef BULLYSCOPE_LEXICON_HPP
#define BULLYSCOPE_LEXICON_HPP

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "io.hpp"
#include "session.hpp"
#include "text.hpp"

namespace bullyscope {

/// A set of lowercase word patterns. A pattern is either a literal token or
/// a prefix followed by a single trailing '*' ("kill*" matches "killing").
class Lexicon {
 public:
  Lexicon() = default;

  static Lexicon from_patterns(std::string name,
                               const std::vector<std::string>& patterns) {
    Lexicon lex;
    lex.name_ = std::move(name);
    for (const auto& raw : patterns) {
      std::string p = to_lower_ascii(trim(raw));
      if (p.empty()) continue;
      if (p.find_first_of(" \t") != std::string::npos) {
        throw DataError("lexicon '" + lex.name_ + "': pattern '" + p +
                        "' contains whitespace");
      }
      const auto star = p.find('*');
      if (star != std::string::npos) {
        if (star != p.size() - 1) {
          throw DataError("lexicon '" + lex.name_ + "': wildcard must be the "
                          "final character in '" + p + "'");
        }
        if (p.size() == 1) {
          throw DataError("lexicon '" + lex.name_ + "': bare '*' pattern");
        }
        lex.prefixes_.insert(p.substr(0, p.size() - 1));
      } else {
        lex.literals_.insert(p);
      }
    }
    if (lex.literals_.empty() && lex.prefixes_.empty()) {
      throw DataError("lexicon '" + lex.name_ + "' is empty");
    }
    return lex;
  }

  const std::string& name() const { return name_; }

  bool matches(std::string_view token) const {
    if (literals_.find(token) != literals_.end()) return true;
    if (prefixes_.empty()) return false;
    for (std::size_t len = 1; len <= token.size(); ++len) {
      if (prefixes_.find(token.substr(0, len)) != prefixes_.end()) return true;
    }
    return false;
  }

  /// All patterns in canonical form (literals, then "prefix*"), sorted.
  std::vector<std::string> patterns() const {
    std::vector<std::string> out(literals_.begin(), literals_.end());
    for (const auto& p : prefixes_) out.push_back(p + "*");
    std::sort(out.begin(), out.end());
    return out;
  }

  std::size_t size() const { return literals_.size() + prefixes_.size(); }

 private:
  std::string name_;
  std::set<std::string, std::less<>> literals_;
  std::set<std::string, std::less<>> prefixes_;
};

/// Parses one pattern per line; blank lines and '#' comments are ignored.
inline Lexicon parse_lexicon(std::string name, std::string_view text) {
  std::vector<std::string> patterns;
  for (const auto& line : io::split_lines(text)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    patterns.emplace_back(t);
  }
  return Lexicon::from_patterns(std::move(name), patterns);
}

inline Lexicon load_lexicon(const std::filesystem::path& path) {
  return parse_lexicon(path.stem().string(), io::read_file(path));
}

/// Named categories, each backed by its own lexicon.
struct CategoryLexicon {
  std::map<std::string, Lexicon> categories;
};

/// Parses "category: word1 word2 ..." lines.
inline CategoryLexicon parse_category_lexicon(std::string_view text) {
  CategoryLexicon cats;
  int line_no = 0;
  for (const auto& line : io::split_lines(text)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto colon = t.find(':');
    if (colon == std::string_view::npos) {
      throw DataError("category lexicon line " + std::to_string(line_no) +
                      ": expected 'category: words...'");
    }
    std::string name = to_lower_ascii(trim(t.substr(0, colon)));
    if (name.empty()) {
      throw DataError("category lexicon line " + std::to_string(line_no) +
                      ": empty category name");
    }
    if (cats.categories.count(name) != 0) {
      throw DataError("category lexicon: duplicate category '" + name + "'");
    }
    std::vector<std::string> words;
    std::string_view rest = t.substr(colon + 1);
    std::size_t i = 0;
    while (i < rest.size()) {
      while (i < rest.size() && detail::is_space_byte(static_cast<unsigned char>(rest[i]))) ++i;
      std::size_t start = i;
      while (i < rest.size() && !detail::is_space_byte(static_cast<unsigned char>(rest[i]))) ++i;
      if (i > start) words.emplace_back(rest.substr(start, i - start));
    }
    cats.categories.emplace(name, Lexicon::from_patterns(name, words));
  }
  if (cats.categories.empty()) throw DataError("category lexicon is empty");
  return cats;
}

inline CategoryLexicon load_category_lexicon(const std::filesystem::path& path) {
  return parse_category_lexicon(io::read_file(path));
}

/// A comment is negative when at least one of its tokens hits the lexicon.
inline bool tag_comment_negative(const Comment& comment, const Lexicon& profanity) {
  for (const auto& tok : tokenize(comment.text)) {
    if (profanity.matches(tok)) return true;
  }
  return false;
}

/// Percentage (0-100) of the session's comments tagged negative.
inline double session_negativity_pct(const MediaSession& session,
                                     const Lexicon& profanity) {
  if (session.comments.empty()) {
    throw DataError("negativity of session '" + session.session_id +
                    "' is undefined: no comments");
  }
  std::size_t negative = 0;
  for (const auto& c : session.comments) {
    if (tag_comment_negative(c, profanity)) ++negative;
  }
  return 100.0 * static_cast<double>(negative) /
         static_cast<double>(session.comments.size());
}

struct CategoryCounts {
  std::map<std::string, std::size_t> counts;
  std::size_t word_count = 0;
};

/// Per-category token hits over all comment texts. A token matching several
/// categories is counted once in each.
inline CategoryCounts category_counts(const MediaSession& session,
                                      const CategoryLexicon& cats) {
  CategoryCounts out;
  for (const auto& [name, lex] : cats.categories) out.counts[name] = 0;
  for (const auto& c : session.comments) {
    for (const auto& tok : tokenize(c.text)) {
      ++out.word_count;
      for (const auto& [name, lex] : cats.categories) {
        if (lex.matches(tok)) ++out.counts[name];
      }
    }
  }
  return out;
}

}  // namespace bullyscope

#endif  // BULLYSCOPE_LEXICON_HPP
