#ifndef BULLYSCOPE_ANALYSIS_HPP
#define BULLYSCOPE_ANALYSIS_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "features.hpp"
#include "io.hpp"
#include "labels.hpp"
#include "lexicon.hpp"
#include "numerics/stats.hpp"
#include "session.hpp"

namespace bullyscope {

using Cell = std::optional<double>;

struct ReportRow {
  std::string label;
  std::vector<Cell> cells;
};

/// A rectangular table of optional numbers plus free-form notes.
struct Report {
  std::string name;
  std::string row_header = "row";
  std::vector<std::string> columns;
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;

  void add_row(std::string label, std::vector<Cell> cells) {
    if (cells.size() != columns.size()) {
      throw NumericError("report " + name + ": row '" + label + "' has " +
                         std::to_string(cells.size()) + " cells, expected " +
                         std::to_string(columns.size()));
    }
    rows.push_back({std::move(label), std::move(cells)});
  }

  const ReportRow& row(std::string_view label) const {
    for (const auto& r : rows) {
      if (r.label == label) return r;
    }
    throw DataError("report " + name + ": no row '" + std::string(label) + "'");
  }

  Cell at(std::string_view row_label, std::string_view column) const {
    const auto it = std::find(columns.begin(), columns.end(), column);
    if (it == columns.end()) {
      throw DataError("report " + name + ": no column '" + std::string(column) + "'");
    }
    return row(row_label).cells[static_cast<std::size_t>(it - columns.begin())];
  }
};

inline std::string report_to_csv(const Report& r) {
  std::string out = io::csv_escape(r.row_header);
  for (const auto& c : r.columns) out += "," + io::csv_escape(c);
  out += "\n";
  for (const auto& row : r.rows) {
    out += io::csv_escape(row.label);
    for (const auto& c : row.cells) out += "," + (c ? io::format_double(*c) : std::string());
    out += "\n";
  }
  return out;
}

inline nlohmann::ordered_json report_to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["row_header"] = r.row_header;
  j["columns"] = r.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json values = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
      values[r.columns[i]] = row.cells[i] ? nlohmann::ordered_json(*row.cells[i])
                                          : nlohmann::ordered_json(nullptr);
    }
    rows.push_back({{"label", row.label}, {"values", std::move(values)}});
  }
  j["rows"] = std::move(rows);
  j["notes"] = r.notes;
  return j;
}

/// One two-column (x, y) series per report column; null cells are omitted.
inline std::vector<std::pair<std::string, std::string>> report_plot_series(const Report& r) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t c = 0; c < r.columns.size(); ++c) {
    std::string body = "x\ty\n";
    for (const auto& row : r.rows) {
      if (row.cells[c]) body += row.label + "\t" + io::format_double(*row.cells[c]) + "\n";
    }
    out.emplace_back(r.columns[c], std::move(body));
  }
  return out;
}

namespace detail {

struct LabeledSession {
  const MediaSession* session;
  const AggregatedLabel* label;
};

// Labeled sessions sorted by id, so every report is independent of input order.
inline std::vector<LabeledSession> labeled_sessions(const Corpus& corpus,
                                                    const std::vector<AggregatedLabel>& labels,
                                                    std::vector<std::string>& notes) {
  std::unordered_map<std::string, const AggregatedLabel*> by_id;
  for (const auto& l : labels) by_id.emplace(l.session_id, &l);
  std::vector<LabeledSession> out;
  std::size_t skipped = 0;
  for (const auto& s : corpus.sessions) {
    auto it = by_id.find(s.session_id);
    if (it == by_id.end()) {
      ++skipped;
    } else {
      out.push_back({&s, it->second});
    }
  }
  std::sort(out.begin(), out.end(), [](const LabeledSession& a, const LabeledSession& b) {
    return a.session->session_id < b.session->session_id;
  });
  if (skipped > 0) notes.push_back(std::to_string(skipped) + " sessions without labels skipped");
  return out;
}

inline double sorted_mean(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return mean(v);
}

// Welch p-value, 1.0 for two identical constant samples, null otherwise when
// the test is undefined.
inline Cell welch_p(std::vector<double> x, std::vector<double> y, const std::string& what,
                    std::vector<std::string>& notes) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  if (x.size() < 2 || y.size() < 2) {
    notes.push_back(what + ": p-value undefined (fewer than 2 sessions in a class)");
    return std::nullopt;
  }
  const bool x_const = x.front() == x.back();
  const bool y_const = y.front() == y.back();
  if (x_const && y_const && x.front() == y.front()) return 1.0;
  try {
    return welch_t(x, y).p_two_sided;
  } catch (const NumericError& e) {
    notes.push_back(what + ": p-value undefined (" + e.what() + ")");
    return std::nullopt;
  }
}

inline Cell safe_pearson(std::vector<std::pair<double, double>> xy, const std::string& what,
                         std::vector<std::string>& notes) {
  std::sort(xy.begin(), xy.end());
  std::vector<double> x, y;
  for (const auto& [a, b] : xy) {
    x.push_back(a);
    y.push_back(b);
  }
  try {
    return pearson(x, y);
  } catch (const NumericError& e) {
    notes.push_back(what + ": correlation undefined (" + e.what() + ")");
    return std::nullopt;
  }
}

inline Cell ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

}  // namespace detail

/// Fraction of sessions receiving exactly j positive votes, j = 0..n.
inline Report vote_distribution(const std::vector<AggregatedLabel>& labels) {
  if (labels.empty()) throw DataError("vote distribution: no labels");
  std::size_t n = 0;
  for (const auto& l : labels) n = std::max(n, l.n_raters);
  std::vector<std::size_t> agg(n + 1, 0), bully(n + 1, 0);
  for (const auto& l : labels) {
    ++agg[l.aggression_votes];
    ++bully[l.bullying_votes];
  }
  Report r;
  r.name = "vote_distribution";
  r.row_header = "votes";
  r.columns = {"aggression", "bullying"};
  const auto total = static_cast<double>(labels.size());
  for (std::size_t j = 0; j <= n; ++j) {
    r.add_row(std::to_string(j), {static_cast<double>(agg[j]) / total,
                                  static_cast<double>(bully[j]) / total});
  }
  return r;
}

/// Counts of sessions by (bullying votes, aggression votes). Sessions with
/// more bullying than aggression votes are flagged in the notes.
inline Report vote_heatmap(const std::vector<AggregatedLabel>& labels) {
  std::size_t n = 5;
  for (const auto& l : labels) n = std::max(n, l.n_raters);
  std::vector<std::vector<double>> grid(n + 1, std::vector<double>(n + 1, 0.0));
  std::vector<std::string> flagged;
  for (const auto& l : labels) {
    grid[l.bullying_votes][l.aggression_votes] += 1.0;
    if (l.bullying_votes > l.aggression_votes) {
      flagged.push_back("session '" + l.session_id + "': bullying votes " +
                        std::to_string(l.bullying_votes) + " > aggression votes " +
                        std::to_string(l.aggression_votes));
    }
  }
  std::sort(flagged.begin(), flagged.end());
  Report r;
  r.name = "vote_heatmap";
  r.row_header = "bullying_votes";
  for (std::size_t a = 0; a <= n; ++a) r.columns.push_back("aggression=" + std::to_string(a));
  for (std::size_t b = 0; b <= n; ++b) {
    r.add_row(std::to_string(b), std::vector<Cell>(grid[b].begin(), grid[b].end()));
  }
  r.notes.push_back(std::to_string(flagged.size()) + " sessions below the diagonal");
  r.notes.insert(r.notes.end(), flagged.begin(), flagged.end());
  return r;
}

/// Index of the negativity bin for `negative` of `total` comments:
/// 0 for [0,10], b for (10b, 10b+10].
inline std::size_t negativity_bin(std::size_t negative, std::size_t total) {
  if (total == 0) throw DataError("negativity bin: no comments");
  const std::size_t ceil_tenths = (10 * negative + total - 1) / total;
  return ceil_tenths == 0 ? 0 : ceil_tenths - 1;
}

inline std::string negativity_bin_label(std::size_t b) {
  if (b == 0) return "[0-10]";
  return "(" + std::to_string(10 * b) + "-" + std::to_string(10 * b + 10) + "]";
}

/// Per negativity bin: session count and percentage of majority-positive
/// sessions for each label kind (null for empty bins).
inline Report negativity_bins_report(const Corpus& corpus,
                                     const std::vector<AggregatedLabel>& labels,
                                     const Lexicon& profanity) {
  Report r;
  r.name = "negativity_bins";
  r.row_header = "negativity_pct";
  r.columns = {"sessions", "aggression_pct", "bullying_pct"};
  std::vector<std::size_t> count(10, 0), agg(10, 0), bully(10, 0);
  std::size_t no_comments = 0;
  for (const auto& ls : detail::labeled_sessions(corpus, labels, r.notes)) {
    const auto& s = *ls.session;
    if (s.comments.empty()) {
      ++no_comments;
      continue;
    }
    std::size_t negative = 0;
    for (const auto& c : s.comments) negative += tag_comment_negative(c, profanity) ? 1 : 0;
    const std::size_t b = negativity_bin(negative, s.comments.size());
    ++count[b];
    agg[b] += ls.label->is_aggression ? 1 : 0;
    bully[b] += ls.label->is_bullying ? 1 : 0;
  }
  if (no_comments > 0) {
    r.notes.push_back(std::to_string(no_comments) + " sessions without comments skipped");
  }
  for (std::size_t b = 0; b < 10; ++b) {
    Cell a, y;
    if (count[b] > 0) {
      a = 100.0 * static_cast<double>(agg[b]) / static_cast<double>(count[b]);
      y = 100.0 * static_cast<double>(bully[b]) / static_cast<double>(count[b]);
    }
    r.add_row(negativity_bin_label(b), {static_cast<double>(count[b]), a, y});
  }
  return r;
}

/// Pearson r between vote counts and the number of inter-comment gaps at or
/// below each threshold, plus a class comparison of the fraction of gaps
/// within one hour.
inline Report temporal_correlation_report(const Corpus& corpus,
                                          const std::vector<AggregatedLabel>& labels,
                                          std::span<const std::int64_t> thresholds) {
  Report r;
  r.name = "temporal_correlation";
  r.row_header = "row";
  r.columns = {"threshold_s", "r_bullying", "r_aggression",
               "mean_positive", "mean_negative", "welch_p"};
  std::vector<std::pair<std::vector<double>, const AggregatedLabel*>> rows;
  std::size_t short_sessions = 0;
  for (const auto& ls : detail::labeled_sessions(corpus, labels, r.notes)) {
    if (ls.session->comments.size() < 2) {
      ++short_sessions;
      continue;
    }
    rows.emplace_back(temporal_features(*ls.session, thresholds), ls.label);
  }
  if (short_sessions > 0) {
    r.notes.push_back(std::to_string(short_sessions) +
                      " sessions with fewer than 2 comments skipped");
  }
  if (rows.size() < 3) {
    throw DataError("temporal correlation needs at least 3 labeled sessions with 2+ comments");
  }
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    std::vector<std::pair<double, double>> bully, agg;
    for (const auto& [f, l] : rows) {
      bully.emplace_back(f[t], static_cast<double>(l->bullying_votes));
      agg.emplace_back(f[t], static_cast<double>(l->aggression_votes));
    }
    const std::string tag = "threshold " + std::to_string(thresholds[t]) + "s";
    r.add_row("gaps<=" + std::to_string(thresholds[t]),
              {static_cast<double>(thresholds[t]),
               detail::safe_pearson(bully, tag + " bullying", r.notes),
               detail::safe_pearson(agg, tag + " aggression", r.notes), std::nullopt,
               std::nullopt, std::nullopt});
  }
  for (auto kind : {LabelKind::bullying, LabelKind::aggression}) {
    std::vector<double> pos, neg;
    for (const auto& [f, l] : rows) (l->positive(kind) ? pos : neg).push_back(f.back());
    const std::string tag = "fraction_within_1h:" + std::string(to_string(kind));
    Cell mp = pos.empty() ? Cell() : Cell(detail::sorted_mean(pos));
    Cell mn = neg.empty() ? Cell() : Cell(detail::sorted_mean(neg));
    if (pos.empty() || neg.empty()) r.notes.push_back(tag + ": a class is empty");
    r.add_row(tag, {std::nullopt, std::nullopt, std::nullopt, mp, mn,
                    detail::welch_p(pos, neg, tag, r.notes)});
  }
  return r;
}

/// Owner graph statistics per class: means, Welch p, and the ratio of the
/// negative-class mean to the positive-class mean.
inline Report graph_property_table(const Corpus& corpus,
                                   const std::vector<AggregatedLabel>& labels) {
  Report r;
  r.name = "graph_properties";
  r.row_header = "row";
  r.columns = {"likes", "media", "following", "followers"};
  const auto labeled = detail::labeled_sessions(corpus, labels, r.notes);
  auto props = [](const MediaSession& s) {
    const auto& o = s.owner_stats;
    return std::array<double, 4>{static_cast<double>(o.likes),
                                 static_cast<double>(o.media_count),
                                 static_cast<double>(o.following),
                                 static_cast<double>(o.followers)};
  };
  for (auto kind : {LabelKind::bullying, LabelKind::aggression}) {
    const std::string name(to_string(kind));
    std::array<std::vector<double>, 4> pos, neg;
    for (const auto& ls : labeled) {
      const auto p = props(*ls.session);
      auto& side = ls.label->positive(kind) ? pos : neg;
      for (std::size_t i = 0; i < 4; ++i) side[i].push_back(p[i]);
    }
    std::vector<Cell> mp(4), mn(4), pv(4), rt(4);
    for (std::size_t i = 0; i < 4; ++i) {
      const std::string tag = name + " " + r.columns[i];
      if (!pos[i].empty()) mp[i] = detail::sorted_mean(pos[i]);
      if (!neg[i].empty()) mn[i] = detail::sorted_mean(neg[i]);
      pv[i] = detail::welch_p(pos[i], neg[i], tag, r.notes);
      if (mp[i] && mn[i]) rt[i] = detail::ratio(*mn[i], *mp[i]);
      if (mp[i] && mn[i] && !rt[i]) r.notes.push_back(tag + ": ratio undefined (positive mean 0)");
    }
    if (pos[0].empty()) r.notes.push_back(name + ": positive class is empty");
    if (neg[0].empty()) r.notes.push_back("non_" + name + ": class is empty");
    r.add_row(name, mp);
    r.add_row("non_" + name, mn);
    r.add_row("p_" + name, pv);
    r.add_row("ratio_" + name, rt);
  }
  return r;
}

/// Per category: mean token hits in positive and negative sessions, their
/// ratio (positive over negative) and Welch p.
inline Report liwc_ratio_report(const Corpus& corpus, const std::vector<AggregatedLabel>& labels,
                                const CategoryLexicon& cats,
                                LabelKind kind = LabelKind::bullying) {
  Report r;
  r.name = "liwc_ratio_" + std::string(to_string(kind));
  r.row_header = "category";
  r.columns = {"mean_positive", "mean_negative", "ratio", "welch_p"};
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> values;
  for (const auto& [name, lex] : cats.categories) values[name];
  for (const auto& ls : detail::labeled_sessions(corpus, labels, r.notes)) {
    const auto counts = category_counts(*ls.session, cats);
    for (const auto& [name, n] : counts.counts) {
      auto& v = values[name];
      (ls.label->positive(kind) ? v.first : v.second).push_back(static_cast<double>(n));
    }
  }
  for (auto& [name, v] : values) {
    if (v.first.empty() || v.second.empty()) {
      throw DataError("liwc ratio: both classes must be non-empty");
    }
    const double mp = detail::sorted_mean(v.first);
    const double mn = detail::sorted_mean(v.second);
    const Cell ratio = detail::ratio(mp, mn);
    if (!ratio) r.notes.push_back(name + ": ratio undefined (negative-class mean 0)");
    r.add_row(name, {mp, mn, ratio, detail::welch_p(v.first, v.second, name, r.notes)});
  }
  return r;
}

/// Per image category: share of all sessions, and the fraction of that
/// category's sessions labeled bullying / aggression (null when empty).
inline Report image_category_report(const Corpus& corpus,
                                    const std::vector<AggregatedLabel>& labels,
                                    const std::map<std::string, ImageLabel>& images) {
  Report r;
  r.name = "image_categories";
  r.row_header = "category";
  r.columns = {"fraction_of_sessions", "bullying_fraction", "aggression_fraction"};
  std::vector<std::size_t> count(kImageCategories.size(), 0), bully(count), agg(count);
  std::size_t total = 0, missing = 0;
  for (const auto& ls : detail::labeled_sessions(corpus, labels, r.notes)) {
    auto it = images.find(ls.session->session_id);
    if (it == images.end()) {
      ++missing;
      continue;
    }
    const std::size_t c = image_category_index(it->second.category);
    ++total;
    ++count[c];
    bully[c] += ls.label->is_bullying ? 1 : 0;
    agg[c] += ls.label->is_aggression ? 1 : 0;
  }
  if (missing > 0) r.notes.push_back(std::to_string(missing) + " sessions without image labels skipped");
  if (total == 0) throw DataError("image category report: no sessions with image labels");
  for (std::size_t c = 0; c < kImageCategories.size(); ++c) {
    const double n = static_cast<double>(count[c]);
    Cell b, a;
    if (count[c] > 0) {
      b = static_cast<double>(bully[c]) / n;
      a = static_cast<double>(agg[c]) / n;
    }
    r.add_row(std::string(kImageCategories[c]), {n / static_cast<double>(total), b, a});
  }
  return r;
}

}  // namespace bullyscope

#endif  // BULLYSCOPE_ANALYSIS_HPP
