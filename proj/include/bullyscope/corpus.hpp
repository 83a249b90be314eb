#ifndef BULLYSCOPE_CORPUS_HPP
#define BULLYSCOPE_CORPUS_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "io.hpp"
#include "lexicon.hpp"
#include "session.hpp"

namespace bullyscope {

namespace detail {

struct RecordError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::int64_t json_seconds(const nlohmann::json& v, const char* what) {
  if (!v.is_number()) throw RecordError(std::string(what) + " is not a number");
  const double d = v.get<double>();
  if (!std::isfinite(d) || d < 0.0) {
    throw RecordError(std::string(what) + " must be a non-negative time");
  }
  // Sub-second precision is dropped.
  return v.is_number_integer() ? v.get<std::int64_t>()
                               : static_cast<std::int64_t>(std::floor(d));
}

inline std::uint64_t json_count(const nlohmann::json& v, const char* what) {
  if (!v.is_number()) throw RecordError(std::string(what) + " is not a number");
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const double d = v.get<double>();
  if (!std::isfinite(d) || d < 0.0) {
    throw RecordError(std::string(what) + " must be a non-negative count");
  }
  return static_cast<std::uint64_t>(std::floor(d));
}

inline std::string json_string(const nlohmann::json& v, const char* what) {
  if (!v.is_string()) throw RecordError(std::string(what) + " is not a string");
  return v.get<std::string>();
}

inline const std::set<std::string, std::less<>>& known_session_fields() {
  static const std::set<std::string, std::less<>> kFields = {
      "session_id", "owner_id",    "caption",  "post_time",
      "likes",      "followers",   "following", "media_count",
      "comments",   "image_category_votes"};
  return kFields;
}

// Parses one session record, appending non-fatal findings to `warnings`.
// Throws RecordError when the record must be skipped.
inline MediaSession parse_session(const nlohmann::json& j,
                                  std::vector<std::string>& warnings) {
  if (!j.is_object()) throw RecordError("record is not a JSON object");
  MediaSession s;
  if (!j.contains("session_id")) throw RecordError("missing session_id");
  s.session_id = json_string(j["session_id"], "session_id");
  if (s.session_id.empty()) throw RecordError("empty session_id");
  const std::string tag = "session '" + s.session_id + "': ";

  for (const auto& [key, value] : j.items()) {
    if (known_session_fields().count(key) == 0) {
      warnings.push_back(tag + "unknown field '" + key + "' ignored");
    }
  }

  if (j.contains("owner_id")) s.owner_id = json_string(j["owner_id"], "owner_id");
  if (j.contains("caption")) s.caption = json_string(j["caption"], "caption");
  if (j.contains("post_time")) {
    s.post_time = json_seconds(j["post_time"], "post_time");
  } else {
    warnings.push_back(tag + "missing post_time, using 0");
  }

  auto stat = [&](const char* key, std::uint64_t& out) {
    if (j.contains(key)) {
      out = json_count(j[key], key);
    } else {
      warnings.push_back(tag + "missing " + key + ", using 0");
    }
  };
  stat("likes", s.owner_stats.likes);
  stat("followers", s.owner_stats.followers);
  stat("following", s.owner_stats.following);
  stat("media_count", s.owner_stats.media_count);

  if (j.contains("image_category_votes")) {
    const auto& votes = j["image_category_votes"];
    if (!votes.is_array()) throw RecordError("image_category_votes is not an array");
    for (const auto& rater : votes) {
      if (!rater.is_array()) {
        throw RecordError("image_category_votes entry is not an array");
      }
      std::vector<std::string> cats;
      for (const auto& c : rater) cats.push_back(json_string(c, "image category"));
      s.image_category_votes.push_back(std::move(cats));
    }
  }

  if (!j.contains("comments")) {
    warnings.push_back(tag + "missing comments, using none");
  } else {
    const auto& comments = j["comments"];
    if (!comments.is_array()) throw RecordError("comments is not an array");
    for (const auto& cj : comments) {
      if (!cj.is_object()) throw RecordError("comment is not an object");
      Comment c;
      if (!cj.contains("author_id")) throw RecordError("comment missing author_id");
      c.author_id = json_string(cj["author_id"], "author_id");
      if (!cj.contains("posted_at")) throw RecordError("comment missing posted_at");
      c.posted_at = json_seconds(cj["posted_at"], "posted_at");
      if (cj.contains("text")) c.text = json_string(cj["text"], "text");
      if (cj.contains("is_owner")) {
        if (!cj["is_owner"].is_boolean()) throw RecordError("is_owner is not a boolean");
        c.is_owner = cj["is_owner"].get<bool>();
      } else {
        warnings.push_back(tag + "comment without is_owner, assuming false");
      }
      if (c.text.empty()) warnings.push_back(tag + "comment with empty text");
      s.comments.push_back(std::move(c));
    }
  }

  const bool sorted = std::is_sorted(
      s.comments.begin(), s.comments.end(),
      [](const Comment& a, const Comment& b) { return a.posted_at < b.posted_at; });
  if (!sorted) {
    // Ties keep file order.
    std::stable_sort(s.comments.begin(), s.comments.end(),
                     [](const Comment& a, const Comment& b) {
                       return a.posted_at < b.posted_at;
                     });
    warnings.push_back(tag + "comments out of order, re-sorted by posted_at");
  }
  if (!s.comments.empty() && s.post_time > s.comments.front().posted_at) {
    warnings.push_back(tag + "post_time is after the first comment");
  }
  return s;
}

}  // namespace detail

/// Parses JSON-lines session records. Malformed lines are skipped with a
/// warning; a duplicate session_id or an input with no usable session is an
/// error.
inline Corpus parse_corpus(std::string_view text, std::string provenance) {
  Corpus corpus;
  corpus.provenance = std::move(provenance);
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  for (const auto& line : io::split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    std::vector<std::string> local;
    MediaSession s;
    try {
      s = detail::parse_session(nlohmann::json::parse(line), local);
    } catch (const nlohmann::json::exception& e) {
      corpus.ingest_warnings.push_back(where + "malformed JSON skipped (" +
                                       e.what() + ")");
      continue;
    } catch (const detail::RecordError& e) {
      corpus.ingest_warnings.push_back(where + "invalid record skipped (" +
                                       e.what() + ")");
      continue;
    }
    if (!seen.insert(s.session_id).second) {
      throw DataError(where + "duplicate session_id '" + s.session_id + "'");
    }
    for (auto& w : local) corpus.ingest_warnings.push_back(where + w);
    corpus.sessions.push_back(std::move(s));
  }
  if (corpus.sessions.empty()) {
    throw DataError("no parseable sessions in " + corpus.provenance);
  }
  return corpus;
}

inline Corpus load_corpus(const std::filesystem::path& path) {
  return parse_corpus(io::read_file(path), path.string());
}

inline nlohmann::ordered_json session_to_json(const MediaSession& s) {
  nlohmann::ordered_json j;
  j["session_id"] = s.session_id;
  j["owner_id"] = s.owner_id;
  j["caption"] = s.caption;
  j["post_time"] = s.post_time;
  j["likes"] = s.owner_stats.likes;
  j["followers"] = s.owner_stats.followers;
  j["following"] = s.owner_stats.following;
  j["media_count"] = s.owner_stats.media_count;
  auto comments = nlohmann::ordered_json::array();
  for (const auto& c : s.comments) {
    nlohmann::ordered_json cj;
    cj["author_id"] = c.author_id;
    cj["posted_at"] = c.posted_at;
    cj["text"] = c.text;
    cj["is_owner"] = c.is_owner;
    comments.push_back(std::move(cj));
  }
  j["comments"] = std::move(comments);
  j["image_category_votes"] = s.image_category_votes;
  return j;
}

inline std::string corpus_to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& s : corpus.sessions) {
    out += session_to_json(s).dump();
    out += '\n';
  }
  return out;
}

inline void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  io::write_file_atomic(path, corpus_to_jsonl(corpus));
}

/// Keeps sessions with at least `min_comments` comments of which at least
/// one, written by someone other than the owner, is tagged negative.
inline Corpus filter_sessions(const Corpus& corpus, std::size_t min_comments,
                              const Lexicon& profanity) {
  if (min_comments < 1) throw UsageError("min_comments must be >= 1");
  Corpus out;
  out.provenance = corpus.provenance;
  out.ingest_warnings = corpus.ingest_warnings;
  for (const auto& s : corpus.sessions) {
    if (s.comments.size() < min_comments) continue;
    const bool profane = std::any_of(
        s.comments.begin(), s.comments.end(), [&](const Comment& c) {
          return !c.is_owner && tag_comment_negative(c, profanity);
        });
    if (profane) out.sessions.push_back(s);
  }
  return out;
}

/// Copy of `session` keeping only its k earliest comments.
inline MediaSession truncate_comments(const MediaSession& session, std::size_t k) {
  MediaSession out = session;
  if (out.comments.size() > k) {
    out.comments.erase(out.comments.begin() + static_cast<std::ptrdiff_t>(k),
                       out.comments.end());
  }
  return out;
}

}  // namespace bullyscope

#endif  // BULLYSCOPE_CORPUS_HPP
