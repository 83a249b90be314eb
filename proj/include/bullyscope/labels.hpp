#ifndef BULLYSCOPE_LABELS_HPP
#define BULLYSCOPE_LABELS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "io.hpp"
#include "text.hpp"

namespace bullyscope {

enum class LabelKind { bullying, aggression };

inline std::string_view to_string(LabelKind kind) {
  return kind == LabelKind::bullying ? "bullying" : "aggression";
}

inline LabelKind parse_label_kind(std::string_view s) {
  if (s == "bullying") return LabelKind::bullying;
  if (s == "aggression") return LabelKind::aggression;
  throw UsageError("unknown label kind '" + std::string(s) +
                   "' (expected bullying or aggression)");
}

/// One rater's binary judgments for one session.
struct LabelRecord {
  std::string session_id;
  std::string rater_id;
  double trust = 1.0;  // (0, 1]
  bool aggression_vote = false;
  bool bullying_vote = false;
};

struct AggregatedLabel {
  std::string session_id;
  std::size_t n_raters = 0;
  std::size_t aggression_votes = 0;
  std::size_t bullying_votes = 0;
  double aggression_confidence = 0.0;
  double bullying_confidence = 0.0;
  bool is_bullying = false;
  bool is_aggression = false;

  bool positive(LabelKind k) const {
    return k == LabelKind::bullying ? is_bullying : is_aggression;
  }
  std::size_t votes(LabelKind k) const {
    return k == LabelKind::bullying ? bullying_votes : aggression_votes;
  }
  double confidence(LabelKind k) const {
    return k == LabelKind::bullying ? bullying_confidence : aggression_confidence;
  }
};

namespace detail {

// Trust share of the side carrying the larger trust mass; an exact tie goes
// to the "no" side with confidence 0.5.
inline double weighted_confidence(double yes_mass, double no_mass) {
  const double total = yes_mass + no_mass;
  if (std::fabs(yes_mass - no_mass) <= 1e-12 * total) return 0.5;
  return std::max(yes_mass, no_mass) / total;
}

}  // namespace detail

/// Aggregates all votes for one session. The binary label is a strict raw
/// majority; the confidence is the trust-weighted share of the weighted
/// majority side.
inline AggregatedLabel aggregate_votes(std::span<const LabelRecord> records) {
  if (records.empty()) throw DataError("aggregate_votes: no records");
  AggregatedLabel out;
  out.session_id = records.front().session_id;
  std::set<std::string, std::less<>> raters;
  double agg_yes = 0.0, agg_no = 0.0, bully_yes = 0.0, bully_no = 0.0;
  for (const auto& r : records) {
    if (r.session_id != out.session_id) {
      throw DataError("aggregate_votes: mixed sessions '" + out.session_id +
                      "' and '" + r.session_id + "'");
    }
    if (!raters.insert(r.rater_id).second) {
      throw DataError("session '" + out.session_id + "': duplicate rater_id '" +
                      r.rater_id + "'");
    }
    if (!(r.trust > 0.0) || r.trust > 1.0) {
      throw DataError("session '" + out.session_id + "', rater '" + r.rater_id +
                      "': trust must lie in (0, 1]");
    }
    if (r.aggression_vote) {
      ++out.aggression_votes;
      agg_yes += r.trust;
    } else {
      agg_no += r.trust;
    }
    if (r.bullying_vote) {
      ++out.bullying_votes;
      bully_yes += r.trust;
    } else {
      bully_no += r.trust;
    }
  }
  out.n_raters = records.size();
  out.is_aggression = 2 * out.aggression_votes > out.n_raters;
  out.is_bullying = 2 * out.bullying_votes > out.n_raters;
  out.aggression_confidence = detail::weighted_confidence(agg_yes, agg_no);
  out.bullying_confidence = detail::weighted_confidence(bully_yes, bully_no);
  return out;
}

struct AggregationResult {
  std::vector<AggregatedLabel> labels;  // first-appearance order of sessions
  // Sessions where bullying votes exceed aggression votes. Reported only;
  // external data may legitimately contain them.
  std::vector<std::string> violations;
};

inline AggregationResult aggregate_all(const std::vector<LabelRecord>& records) {
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<LabelRecord>> groups;
  for (const auto& r : records) {
    auto [it, inserted] = groups.try_emplace(r.session_id);
    if (inserted) order.push_back(r.session_id);
    it->second.push_back(r);
  }
  AggregationResult out;
  for (const auto& id : order) {
    AggregatedLabel label = aggregate_votes(groups.at(id));
    if (label.bullying_votes > label.aggression_votes) {
      out.violations.push_back(id);
    }
    out.labels.push_back(std::move(label));
  }
  return out;
}

/// Keeps labels whose confidence for `kind` is at least `threshold`.
inline std::vector<AggregatedLabel> filter_by_confidence(
    const std::vector<AggregatedLabel>& labels, double threshold,
    LabelKind kind = LabelKind::bullying) {
  if (threshold < 0.0 || threshold > 1.0) {
    throw UsageError("confidence threshold must lie in [0, 1]");
  }
  std::vector<AggregatedLabel> out;
  for (const auto& l : labels) {
    // Slack absorbs rounding in trust sums so 3/5 passes a 0.6 cut.
    if (l.confidence(kind) >= threshold - 1e-12) out.push_back(l);
  }
  return out;
}

/// Fleiss' kappa for binary (yes/no) ratings where every item received
/// exactly `n_raters` ratings and `yes_counts[i]` of them were "yes".
inline double fleiss_kappa(std::span<const std::size_t> yes_counts,
                           std::size_t n_raters) {
  if (yes_counts.empty()) throw DataError("fleiss_kappa: no items");
  if (n_raters < 2) throw DataError("fleiss_kappa: need at least 2 raters");
  // Integer accumulation keeps the result independent of item order.
  std::uint64_t agreeing_pairs = 0;
  std::uint64_t yes_total = 0;
  for (std::size_t c : yes_counts) {
    if (c > n_raters) {
      throw DataError("fleiss_kappa: yes count exceeds rater count");
    }
    const std::uint64_t no = n_raters - c;
    agreeing_pairs += c * (c - (c > 0 ? 1 : 0)) + no * (no - (no > 0 ? 1 : 0));
    yes_total += c;
  }
  const double n = static_cast<double>(n_raters);
  const double items = static_cast<double>(yes_counts.size());
  const double observed = static_cast<double>(agreeing_pairs) / (items * n * (n - 1.0));
  const double p_yes = static_cast<double>(yes_total) / (items * n);
  const double p_no = 1.0 - p_yes;
  const double expected = p_yes * p_yes + p_no * p_no;
  if (expected >= 1.0) {
    throw NumericError("kappa undefined: every rating falls in one category");
  }
  return (observed - expected) / (1.0 - expected);
}

inline constexpr std::array<std::string_view, 13> kImageCategories = {
    "person", "text", "sport", "celebrity", "clothes", "tattoo", "car",
    "bike",   "nature", "food", "drugs",   "cartoon", "unknown"};

inline std::size_t image_category_index(std::string_view category) {
  for (std::size_t i = 0; i < kImageCategories.size(); ++i) {
    if (kImageCategories[i] == category) return i;
  }
  throw DataError("unknown image category '" + std::string(category) + "'");
}

/// Maps free-form rater answers onto the fixed category set; "don't know"
/// answers and unrecognized labels become "unknown".
inline std::string normalize_image_category(std::string_view raw) {
  std::string s = to_lower_ascii(trim(raw));
  for (auto c : kImageCategories) {
    if (s == c) return s;
  }
  return "unknown";
}

struct ImageLabel {
  std::string session_id;
  std::string category;
  std::map<std::string, std::size_t> vote_counts;
  std::vector<std::string> tied;  // every category sharing the top count
};

/// Majority over per-rater category sets. Each rater counts at most once
/// per category; ties resolve to the lexicographically smallest name.
inline ImageLabel image_category_majority(
    const std::vector<std::vector<std::string>>& votes,
    std::string session_id = {}) {
  if (votes.empty()) throw DataError("image_category_majority: no raters");
  ImageLabel out;
  out.session_id = std::move(session_id);
  for (const auto& rater : votes) {
    std::set<std::string> cats;
    for (const auto& c : rater) cats.insert(normalize_image_category(c));
    if (cats.empty()) cats.insert("unknown");
    for (const auto& c : cats) ++out.vote_counts[c];
  }
  std::size_t best = 0;
  for (const auto& [cat, count] : out.vote_counts) best = std::max(best, count);
  for (const auto& [cat, count] : out.vote_counts) {
    if (count == best) out.tied.push_back(cat);
  }
  out.category = out.tied.front();  // map order is lexicographic
  return out;
}

struct ImageVoteRecord {
  std::string session_id;
  std::string rater_id;
  std::vector<std::string> categories;
};

// ---- file formats --------------------------------------------------------

inline std::vector<LabelRecord> parse_label_records(std::string_view text) {
  std::vector<LabelRecord> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t line_no = 0;
  for (const auto& line : io::split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = "label line " + std::to_string(line_no) + ": ";
    try {
      const auto j = nlohmann::json::parse(line);
      LabelRecord r;
      r.session_id = j.at("session_id").get<std::string>();
      r.rater_id = j.at("rater_id").get<std::string>();
      r.trust = j.at("trust").get<double>();
      r.aggression_vote = j.at("aggression_vote").get<bool>();
      r.bullying_vote = j.at("bullying_vote").get<bool>();
      if (!seen.emplace(r.session_id, r.rater_id).second) {
        throw DataError(where + "duplicate (session_id, rater_id) ('" +
                        r.session_id + "', '" + r.rater_id + "')");
      }
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + e.what());
    }
  }
  if (out.empty()) throw DataError("label file has no records");
  return out;
}

inline std::vector<LabelRecord> load_label_records(const std::filesystem::path& path) {
  return parse_label_records(io::read_file(path));
}

inline std::string label_records_to_jsonl(const std::vector<LabelRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["session_id"] = r.session_id;
    j["rater_id"] = r.rater_id;
    j["trust"] = r.trust;
    j["aggression_vote"] = r.aggression_vote;
    j["bullying_vote"] = r.bullying_vote;
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json aggregated_to_json(const AggregatedLabel& l) {
  nlohmann::ordered_json j;
  j["session_id"] = l.session_id;
  j["n_raters"] = l.n_raters;
  j["aggression_votes"] = l.aggression_votes;
  j["bullying_votes"] = l.bullying_votes;
  j["aggression_confidence"] = l.aggression_confidence;
  j["bullying_confidence"] = l.bullying_confidence;
  j["is_aggression"] = l.is_aggression;
  j["is_bullying"] = l.is_bullying;
  return j;
}

inline std::string aggregated_to_jsonl(const std::vector<AggregatedLabel>& labels) {
  std::string out;
  for (const auto& l : labels) {
    out += aggregated_to_json(l).dump();
    out += '\n';
  }
  return out;
}

/// Reads either raw per-rater records (aggregating them) or an aggregated
/// label file, distinguished by the presence of "rater_id".
inline std::vector<AggregatedLabel> parse_any_labels(std::string_view text) {
  for (const auto& line : io::split_lines(text)) {
    if (trim(line).empty()) continue;
    bool raw = false;
    try {
      raw = nlohmann::json::parse(line).contains("rater_id");
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("label file: ") + e.what());
    }
    if (raw) return aggregate_all(parse_label_records(text)).labels;
    break;
  }
  std::vector<AggregatedLabel> out;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  for (const auto& line : io::split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      AggregatedLabel l;
      l.session_id = j.at("session_id").get<std::string>();
      l.n_raters = j.at("n_raters").get<std::size_t>();
      l.aggression_votes = j.at("aggression_votes").get<std::size_t>();
      l.bullying_votes = j.at("bullying_votes").get<std::size_t>();
      l.aggression_confidence = j.at("aggression_confidence").get<double>();
      l.bullying_confidence = j.at("bullying_confidence").get<double>();
      l.is_aggression = j.at("is_aggression").get<bool>();
      l.is_bullying = j.at("is_bullying").get<bool>();
      if (l.aggression_votes > l.n_raters || l.bullying_votes > l.n_raters) {
        throw DataError("votes exceed n_raters");
      }
      if (!seen.insert(l.session_id).second) {
        throw DataError("duplicate session_id '" + l.session_id + "'");
      }
      out.push_back(std::move(l));
    } catch (const std::exception& e) {
      throw DataError("aggregated label line " + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  if (out.empty()) throw DataError("label file has no records");
  return out;
}

inline std::vector<AggregatedLabel> load_any_labels(const std::filesystem::path& path) {
  return parse_any_labels(io::read_file(path));
}

inline std::vector<ImageVoteRecord> parse_image_votes(std::string_view text) {
  std::vector<ImageVoteRecord> out;
  std::size_t line_no = 0;
  for (const auto& line : io::split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ImageVoteRecord r;
      r.session_id = j.at("session_id").get<std::string>();
      r.rater_id = j.at("rater_id").get<std::string>();
      r.categories = j.at("categories").get<std::vector<std::string>>();
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("image label line " + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  return out;
}

inline std::string image_votes_to_jsonl(const std::vector<ImageVoteRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["session_id"] = r.session_id;
    j["rater_id"] = r.rater_id;
    j["categories"] = r.categories;
    out += j.dump();
    out += '\n';
  }
  return out;
}

/// Resolves raw image votes into one ImageLabel per session.
inline std::map<std::string, ImageLabel> resolve_image_votes(
    const std::vector<ImageVoteRecord>& records) {
  std::map<std::string, std::vector<std::vector<std::string>>> grouped;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& r : records) {
    if (!seen.emplace(r.session_id, r.rater_id).second) {
      throw DataError("image labels: duplicate rater '" + r.rater_id +
                      "' for session '" + r.session_id + "'");
    }
    grouped[r.session_id].push_back(r.categories);
  }
  std::map<std::string, ImageLabel> out;
  for (const auto& [id, votes] : grouped) {
    out.emplace(id, image_category_majority(votes, id));
  }
  return out;
}

}  // namespace bullyscope

#endif  // BULLYSCOPE_LABELS_HPP
