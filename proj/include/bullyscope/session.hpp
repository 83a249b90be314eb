#ifndef BULLYSCOPE_SESSION_HPP
#define BULLYSCOPE_SESSION_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace bullyscope {

struct Comment {
  std::string author_id;
  std::int64_t posted_at = 0;  // seconds since epoch
  std::string text;
  bool is_owner = false;

  friend bool operator==(const Comment&, const Comment&) = default;
};

struct OwnerStats {
  std::uint64_t followers = 0;
  std::uint64_t following = 0;
  std::uint64_t media_count = 0;
  std::uint64_t likes = 0;  // likes on this media object

  friend bool operator==(const OwnerStats&, const OwnerStats&) = default;
};

/// One posted image with its metadata and its comment stream, ordered by
/// posting time.
struct MediaSession {
  std::string session_id;
  std::string owner_id;
  std::string caption;
  std::int64_t post_time = 0;
  std::vector<std::vector<std::string>> image_category_votes;  // per rater
  OwnerStats owner_stats;
  std::vector<Comment> comments;

  friend bool operator==(const MediaSession&, const MediaSession&) = default;
};

struct Corpus {
  std::vector<MediaSession> sessions;
  std::string provenance;
  std::vector<std::string> ingest_warnings;
};

}  // namespace bullyscope

#endif  // BULLYSCOPE_SESSION_HPP
