#ifndef BULLYSCOPE_FEATURES_HPP
#define BULLYSCOPE_FEATURES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "io.hpp"
#include "labels.hpp"
#include "lexicon.hpp"
#include "numerics/sparse.hpp"
#include "numerics/svd.hpp"
#include "session.hpp"
#include "text.hpp"

namespace bullyscope {

/// The texts making up one document (e.g. every comment of a session).
/// Bigrams never span two texts.
using Document = std::vector<std::string>;

/// Unigrams, optionally followed by adjacent-token bigrams, after stop-word
/// removal.
inline std::vector<std::string> document_terms(const Document& doc, bool bigrams,
                                               const Lexicon* stopwords) {
  std::vector<std::string> terms;
  for (const auto& text : doc) {
    std::vector<std::string> toks = tokenize(text);
    if (stopwords != nullptr) {
      std::erase_if(toks, [&](const std::string& t) { return stopwords->matches(t); });
    }
    for (const auto& t : toks) terms.push_back(t);
    if (bigrams) {
      for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
        terms.push_back(toks[i] + " " + toks[i + 1]);
      }
    }
  }
  return terms;
}

struct Vocabulary {
  std::vector<std::string> terms;  // ordered by (-df, term)
  std::unordered_map<std::string, std::size_t> index;
  bool bigrams = false;
  std::size_t min_df = 1;
  std::optional<Lexicon> stopwords;

  std::size_t size() const { return terms.size(); }

  std::optional<std::size_t> find(const std::string& term) const {
    auto it = index.find(term);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  std::string fingerprint() const {
    std::uint64_t h = io::fnv1a64(bigrams ? "bigrams\n" : "unigrams\n");
    if (stopwords) {
      for (const auto& p : stopwords->patterns()) h = io::fnv1a64(p + "\n", h);
    }
    h = io::fnv1a64("--\n", h);
    for (const auto& t : terms) h = io::fnv1a64(t + "\n", h);
    return io::to_hex(h);
  }
};

/// Vocabulary over training documents only: terms with document frequency
/// >= min_df, ordered by decreasing df then lexicographically.
inline Vocabulary build_vocabulary(std::span<const Document> docs, bool bigrams,
                                   const Lexicon* stopwords, std::size_t min_df) {
  std::map<std::string, std::size_t> df;
  for (const auto& doc : docs) {
    std::vector<std::string> terms = document_terms(doc, bigrams, stopwords);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    for (auto& t : terms) ++df[std::move(t)];
  }
  std::vector<std::pair<std::size_t, std::string>> kept;
  for (auto& [term, count] : df) {
    if (count >= min_df) kept.emplace_back(count, term);
  }
  if (kept.empty()) throw DataError("empty vocabulary");
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;  // map order already sorts terms
  });
  Vocabulary v;
  v.bigrams = bigrams;
  v.min_df = min_df;
  if (stopwords != nullptr) v.stopwords = *stopwords;
  for (auto& [count, term] : kept) {
    v.index.emplace(term, v.terms.size());
    v.terms.push_back(std::move(term));
  }
  return v;
}

inline SparseVector normalize_l1(SparseVector v) {
  double total = 0.0;
  for (double x : v.values) total += std::fabs(x);
  if (total > 0.0) {
    for (double& x : v.values) x /= total;
  }
  return v;
}

/// Term counts of `doc` over `vocab`, optionally scaled to sum to one.
/// Out-of-vocabulary terms are ignored; an all-zero vector stays zero.
inline SparseVector vectorize_text(const Document& doc, const Vocabulary& vocab,
                                   bool l1_normalize) {
  std::map<std::uint32_t, double> counts;
  const Lexicon* stop = vocab.stopwords ? &*vocab.stopwords : nullptr;
  for (const auto& t : document_terms(doc, vocab.bigrams, stop)) {
    if (auto i = vocab.find(t)) counts[static_cast<std::uint32_t>(*i)] += 1.0;
  }
  SparseVector v;
  v.dimension = vocab.size();
  for (const auto& [i, c] : counts) {
    v.indices.push_back(i);
    v.values.push_back(c);
  }
  return l1_normalize ? normalize_l1(std::move(v)) : v;
}

/// Projection onto the top right singular vectors of a training
/// document-term matrix.
struct LsaModel {
  std::string vocabulary_fingerprint;
  std::size_t dimension = 0;  // vocabulary size
  std::vector<std::vector<double>> right_vectors;
  std::vector<double> singular_values;

  std::size_t k() const { return right_vectors.size(); }
};

inline LsaModel fit_lsa(std::span<const SparseVector> docs, std::size_t k,
                        std::uint64_t seed, const SvdOptions& opts = {}) {
  if (docs.empty()) throw NumericError("fit_lsa: no documents");
  const std::size_t dim = docs.front().dimension;
  SparseRowMatrix m(std::vector<SparseVector>(docs.begin(), docs.end()), dim);
  SvdResult svd = truncated_svd(m, k, seed, opts);
  LsaModel model;
  model.dimension = dim;
  model.right_vectors = std::move(svd.right_vectors);
  model.singular_values = std::move(svd.singular_values);
  return model;
}

inline std::vector<double> project_lsa(const LsaModel& model, const SparseVector& v) {
  if (v.dimension != model.dimension) {
    throw DataError("project_lsa: vector dimension " + std::to_string(v.dimension) +
                    " != model dimension " + std::to_string(model.dimension));
  }
  std::vector<double> out(model.k());
  for (std::size_t j = 0; j < model.k(); ++j) out[j] = dot(v, model.right_vectors[j]);
  return out;
}

inline const std::vector<std::int64_t>& default_thresholds() {
  // 1 min, 5 min, 15 min, 30 min, 1 h, 1 day, 1 week, 30 days, 180 days.
  static const std::vector<std::int64_t> kLadder = {
      60, 300, 900, 1800, 3600, 86400, 604800, 2592000, 15552000};
  return kLadder;
}

/// Gaps between consecutive comments. Count i is the number of gaps
/// <= thresholds[i]; the final component is the fraction of gaps <= 1 h.
inline std::vector<double> temporal_features(const MediaSession& session,
                                             std::span<const std::int64_t> thresholds,
                                             std::vector<std::string>* warnings = nullptr) {
  std::vector<double> out(thresholds.size() + 1, 0.0);
  if (session.comments.size() < 2) {
    if (warnings != nullptr) {
      warnings->push_back("session '" + session.session_id +
                          "': fewer than 2 comments, temporal features are zero");
    }
    return out;
  }
  std::size_t within_hour = 0;
  const std::size_t gaps = session.comments.size() - 1;
  for (std::size_t i = 1; i < session.comments.size(); ++i) {
    const std::int64_t gap =
        session.comments[i].posted_at - session.comments[i - 1].posted_at;
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      if (gap <= thresholds[t]) out[t] += 1.0;
    }
    if (gap <= 3600) ++within_hour;
  }
  out.back() = static_cast<double>(within_hour) / static_cast<double>(gaps);
  return out;
}

/// log(1 + v) of [likes, media_count, following, followers].
inline std::array<double, 4> social_features(const MediaSession& session) {
  const auto& s = session.owner_stats;
  return {std::log1p(static_cast<double>(s.likes)),
          std::log1p(static_cast<double>(s.media_count)),
          std::log1p(static_cast<double>(s.following)),
          std::log1p(static_cast<double>(s.followers))};
}

inline std::vector<double> image_features(const ImageLabel& label, bool multi_hot = false) {
  std::vector<double> out(kImageCategories.size(), 0.0);
  if (multi_hot) {
    for (const auto& c : label.tied) out[image_category_index(c)] = 1.0;
  }
  out[image_category_index(label.category)] = 1.0;
  return out;
}

/// Hour-of-day (24) and day-of-week (7, Monday first) one-hots, in UTC.
inline std::vector<double> post_time_features(std::int64_t post_time) {
  std::vector<double> out(31, 0.0);
  constexpr std::int64_t kDay = 86400;
  std::int64_t days = post_time / kDay;
  std::int64_t secs = post_time % kDay;
  if (secs < 0) {
    secs += kDay;
    --days;
  }
  out[static_cast<std::size_t>(secs / 3600)] = 1.0;
  const std::int64_t dow = ((days + 3) % 7 + 7) % 7;  // 1970-01-01 was a Thursday
  out[24 + static_cast<std::size_t>(dow)] = 1.0;
  return out;
}

// ---- schema ----------------------------------------------------------------

enum class ComponentKind { continuous, binary };

struct FeatureGroup {
  std::string name;
  std::size_t size = 0;
  ComponentKind kind = ComponentKind::continuous;
  std::string detail;  // parameters that change the meaning of the block
};

class FeatureSchema {
 public:
  void add(FeatureGroup g) { groups_.push_back(std::move(g)); }

  const std::vector<FeatureGroup>& groups() const { return groups_; }

  std::size_t total_size() const {
    std::size_t n = 0;
    for (const auto& g : groups_) n += g.size;
    return n;
  }

  std::string description() const {
    std::string d;
    for (const auto& g : groups_) {
      d += g.name + ":" + std::to_string(g.size) + ":" +
           (g.kind == ComponentKind::binary ? "binary" : "continuous") + ":" +
           g.detail + "|";
    }
    return d;
  }

  std::string fingerprint() const { return io::to_hex(io::fnv1a64(description())); }

  std::vector<ComponentKind> component_kinds() const {
    std::vector<ComponentKind> kinds;
    for (const auto& g : groups_) kinds.insert(kinds.end(), g.size, g.kind);
    return kinds;
  }

 private:
  std::vector<FeatureGroup> groups_;
};

/// Feature values stored sparsely, tagged with the schema they follow.
struct FeatureVector {
  SparseVector values;
  std::string schema_fingerprint;

  std::size_t size() const { return values.dimension; }
  std::vector<double> to_dense() const { return values.to_dense(); }
};

// ---- configuration ---------------------------------------------------------

/// Cumulative feature sets available at image posting time, plus early
/// comments.
enum class LadderLevel { image, user, post_time, caption, comments };

inline constexpr std::array<LadderLevel, 5> kLadder = {
    LadderLevel::image, LadderLevel::user, LadderLevel::post_time,
    LadderLevel::caption, LadderLevel::comments};

inline std::string_view to_string(LadderLevel level) {
  switch (level) {
    case LadderLevel::image: return "image";
    case LadderLevel::user: return "user";
    case LadderLevel::post_time: return "post_time";
    case LadderLevel::caption: return "caption";
    case LadderLevel::comments: return "comments";
  }
  return "?";
}

inline LadderLevel parse_ladder_level(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  for (auto l : kLadder) {
    if (to_string(l) == s) return l;
  }
  throw UsageError("unknown ladder level '" + std::string(s) +
                   "' (expected image, user, post_time, caption or comments)");
}

struct TextConfig {
  bool bigrams = true;
  bool remove_stopwords = true;
  bool normalize = true;
  std::size_t min_df = 2;
  bool lsa = false;
  std::size_t lsa_rank = 100;
};

inline constexpr std::size_t kAllComments = std::numeric_limits<std::size_t>::max();

struct FeatureConfig {
  bool image = false;
  bool social = false;
  bool post_time = false;
  bool caption_text = false;         // separate caption block
  bool comment_text = false;
  bool caption_in_comments = false;  // caption joins the comment document
  std::size_t comment_limit = kAllComments;
  bool temporal = false;
  bool image_multi_hot = false;
  TextConfig text;
  std::vector<std::int64_t> thresholds = default_thresholds();
};

inline FeatureConfig detection_feature_config() {
  FeatureConfig c;
  c.comment_text = true;
  return c;
}

/// Nested prediction feature sets. At level `comments` the first
/// `k_comments` comments add a text block; k = 0 adds nothing.
inline FeatureConfig prediction_feature_config(LadderLevel level, std::size_t k_comments) {
  FeatureConfig c;
  const auto rank = static_cast<int>(level);
  c.image = true;
  c.social = rank >= static_cast<int>(LadderLevel::user);
  c.post_time = rank >= static_cast<int>(LadderLevel::post_time);
  c.caption_text = rank >= static_cast<int>(LadderLevel::caption);
  c.comment_text = level == LadderLevel::comments && k_comments > 0;
  c.comment_limit = k_comments;
  return c;
}

inline Document comment_document(const MediaSession& s, std::size_t limit,
                                 bool with_caption) {
  Document doc;
  if (with_caption) doc.push_back(s.caption);
  const std::size_t n = std::min(limit, s.comments.size());
  for (std::size_t i = 0; i < n; ++i) doc.push_back(s.comments[i].text);
  return doc;
}

/// A fitted text block: vocabulary plus optional LSA projection.
struct TextBlock {
  Vocabulary vocabulary;
  bool normalize = true;
  std::optional<LsaModel> lsa;

  std::size_t width() const { return lsa ? lsa->k() : vocabulary.size(); }

  std::string detail() const {
    return "vocab=" + vocabulary.fingerprint() + ",l1=" + (normalize ? "1" : "0") +
           ",lsa=" + (lsa ? std::to_string(lsa->k()) : std::string("0"));
  }

  SparseVector transform(const Document& doc) const {
    SparseVector v = vectorize_text(doc, vocabulary, normalize);
    if (!lsa) return v;
    return SparseVector::from_dense(project_lsa(*lsa, v));
  }

  static TextBlock fit(std::span<const Document> docs, const TextConfig& cfg,
                       const Lexicon* stopwords, std::uint64_t seed) {
    TextBlock b;
    b.vocabulary = build_vocabulary(docs, cfg.bigrams,
                                    cfg.remove_stopwords ? stopwords : nullptr,
                                    cfg.min_df);
    b.normalize = cfg.normalize;
    if (cfg.lsa) {
      std::vector<SparseVector> rows;
      rows.reserve(docs.size());
      for (const auto& d : docs) rows.push_back(vectorize_text(d, b.vocabulary, cfg.normalize));
      const std::size_t k =
          std::min({cfg.lsa_rank, rows.size(), b.vocabulary.size()});
      b.lsa = fit_lsa(rows, k, seed);
      b.lsa->vocabulary_fingerprint = b.vocabulary.fingerprint();
    }
    return b;
  }
};

/// Fitted feature pipeline. Text blocks are fit on the sessions passed to
/// fit() only; transform() is pure.
class Featurizer {
 public:
  static Featurizer fit(std::span<const MediaSession* const> train,
                        const FeatureConfig& config, const Lexicon& stopwords,
                        std::uint64_t seed) {
    Featurizer f;
    f.config_ = config;
    if (config.caption_text) {
      std::vector<Document> docs;
      for (const auto* s : train) docs.push_back({s->caption});
      f.caption_ = TextBlock::fit(docs, config.text, &stopwords, seed ^ 0x1ULL);
    }
    if (config.comment_text) {
      std::vector<Document> docs;
      for (const auto* s : train) {
        docs.push_back(comment_document(*s, config.comment_limit, config.caption_in_comments));
      }
      f.comments_ = TextBlock::fit(docs, config.text, &stopwords, seed ^ 0x2ULL);
    }
    f.build_schema();
    return f;
  }

  const FeatureSchema& schema() const { return schema_; }
  const FeatureConfig& config() const { return config_; }
  const std::optional<TextBlock>& comment_block() const { return comments_; }
  const std::optional<TextBlock>& caption_block() const { return caption_; }

  /// `image` is required when the configuration uses image features.
  FeatureVector transform(const MediaSession& s, const ImageLabel* image,
                          std::vector<std::string>* warnings = nullptr) const {
    FeatureVector fv;
    fv.schema_fingerprint = fingerprint_;
    SparseVector& v = fv.values;
    if (config_.image) {
      if (image == nullptr) {
        throw DataError("missing image label for session '" + s.session_id + "'");
      }
      v.append_dense(image_features(*image, config_.image_multi_hot));
    }
    if (config_.social) {
      const auto social = social_features(s);
      v.append_dense(social);
    }
    if (config_.post_time) v.append_dense(post_time_features(s.post_time));
    if (caption_) v.append(caption_->transform({s.caption}));
    if (comments_) {
      v.append(comments_->transform(
          comment_document(s, config_.comment_limit, config_.caption_in_comments)));
    }
    if (config_.temporal) {
      v.append_dense(temporal_features(s, config_.thresholds, warnings));
    }
    return fv;
  }

  nlohmann::ordered_json to_json() const;
  static Featurizer from_json(const nlohmann::json& j);

 private:
  void build_schema() {
    schema_ = FeatureSchema{};
    if (config_.image) {
      schema_.add({"image", kImageCategories.size(), ComponentKind::binary,
                   config_.image_multi_hot ? "multi_hot" : "one_hot"});
    }
    if (config_.social) {
      schema_.add({"social", 4, ComponentKind::continuous,
                   "log1p(likes,media,following,followers)"});
    }
    if (config_.post_time) {
      schema_.add({"post_time", 31, ComponentKind::binary, "hour24+dow7"});
    }
    if (caption_) {
      schema_.add({"caption_text", caption_->width(), ComponentKind::continuous,
                   caption_->detail()});
    }
    if (comments_) {
      std::string detail = comments_->detail();
      detail += ",limit=" + (config_.comment_limit == kAllComments
                                 ? std::string("all")
                                 : std::to_string(config_.comment_limit));
      detail += config_.caption_in_comments ? ",caption=1" : ",caption=0";
      schema_.add({"comment_text", comments_->width(), ComponentKind::continuous,
                   detail});
    }
    if (config_.temporal) {
      std::string detail = "thresholds=";
      for (auto t : config_.thresholds) detail += std::to_string(t) + ",";
      schema_.add({"temporal", config_.thresholds.size() + 1,
                   ComponentKind::continuous, detail});
    }
    if (schema_.total_size() == 0) {
      throw UsageError("feature configuration selects no features");
    }
    fingerprint_ = schema_.fingerprint();
  }

  FeatureConfig config_;
  std::optional<TextBlock> caption_;
  std::optional<TextBlock> comments_;
  FeatureSchema schema_;
  std::string fingerprint_;
};

// ---- serialization ---------------------------------------------------------

inline constexpr int kFeaturizerFormatVersion = 1;

inline nlohmann::ordered_json text_config_to_json(const TextConfig& c) {
  nlohmann::ordered_json j;
  j["bigrams"] = c.bigrams;
  j["remove_stopwords"] = c.remove_stopwords;
  j["normalize"] = c.normalize;
  j["min_df"] = c.min_df;
  j["lsa"] = c.lsa;
  j["lsa_rank"] = c.lsa_rank;
  return j;
}

inline TextConfig text_config_from_json(const nlohmann::json& j) {
  TextConfig c;
  c.bigrams = j.at("bigrams").get<bool>();
  c.remove_stopwords = j.at("remove_stopwords").get<bool>();
  c.normalize = j.at("normalize").get<bool>();
  c.min_df = j.at("min_df").get<std::size_t>();
  c.lsa = j.at("lsa").get<bool>();
  c.lsa_rank = j.at("lsa_rank").get<std::size_t>();
  return c;
}

inline nlohmann::ordered_json feature_config_to_json(const FeatureConfig& c) {
  nlohmann::ordered_json j;
  j["image"] = c.image;
  j["social"] = c.social;
  j["post_time"] = c.post_time;
  j["caption_text"] = c.caption_text;
  j["comment_text"] = c.comment_text;
  j["caption_in_comments"] = c.caption_in_comments;
  if (c.comment_limit == kAllComments) {
    j["comment_limit"] = nullptr;
  } else {
    j["comment_limit"] = c.comment_limit;
  }
  j["temporal"] = c.temporal;
  j["image_multi_hot"] = c.image_multi_hot;
  j["text"] = text_config_to_json(c.text);
  j["thresholds"] = c.thresholds;
  return j;
}

inline FeatureConfig feature_config_from_json(const nlohmann::json& j) {
  FeatureConfig c;
  c.image = j.at("image").get<bool>();
  c.social = j.at("social").get<bool>();
  c.post_time = j.at("post_time").get<bool>();
  c.caption_text = j.at("caption_text").get<bool>();
  c.comment_text = j.at("comment_text").get<bool>();
  c.caption_in_comments = j.at("caption_in_comments").get<bool>();
  c.comment_limit = j.at("comment_limit").is_null()
                        ? kAllComments
                        : j.at("comment_limit").get<std::size_t>();
  c.temporal = j.at("temporal").get<bool>();
  c.image_multi_hot = j.at("image_multi_hot").get<bool>();
  c.text = text_config_from_json(j.at("text"));
  c.thresholds = j.at("thresholds").get<std::vector<std::int64_t>>();
  return c;
}

inline nlohmann::ordered_json text_block_to_json(const TextBlock& b) {
  nlohmann::ordered_json j;
  j["terms"] = b.vocabulary.terms;
  j["bigrams"] = b.vocabulary.bigrams;
  j["min_df"] = b.vocabulary.min_df;
  if (b.vocabulary.stopwords) {
    j["stopwords"] = b.vocabulary.stopwords->patterns();
  } else {
    j["stopwords"] = nullptr;
  }
  j["vocabulary_fingerprint"] = b.vocabulary.fingerprint();
  j["normalize"] = b.normalize;
  if (b.lsa) {
    nlohmann::ordered_json l;
    l["k"] = b.lsa->k();
    l["singular_values"] = b.lsa->singular_values;
    l["right_vectors"] = b.lsa->right_vectors;
    j["lsa"] = std::move(l);
  } else {
    j["lsa"] = nullptr;
  }
  return j;
}

inline TextBlock text_block_from_json(const nlohmann::json& j) {
  TextBlock b;
  b.vocabulary.terms = j.at("terms").get<std::vector<std::string>>();
  for (std::size_t i = 0; i < b.vocabulary.terms.size(); ++i) {
    if (!b.vocabulary.index.emplace(b.vocabulary.terms[i], i).second) {
      throw DataError("vocabulary: duplicate term '" + b.vocabulary.terms[i] + "'");
    }
  }
  b.vocabulary.bigrams = j.at("bigrams").get<bool>();
  b.vocabulary.min_df = j.at("min_df").get<std::size_t>();
  if (!j.at("stopwords").is_null()) {
    b.vocabulary.stopwords = Lexicon::from_patterns(
        "stopwords", j.at("stopwords").get<std::vector<std::string>>());
  }
  if (b.vocabulary.fingerprint() != j.at("vocabulary_fingerprint").get<std::string>()) {
    throw DataError("vocabulary fingerprint mismatch");
  }
  b.normalize = j.at("normalize").get<bool>();
  if (!j.at("lsa").is_null()) {
    LsaModel m;
    const auto& l = j.at("lsa");
    m.singular_values = l.at("singular_values").get<std::vector<double>>();
    m.right_vectors = l.at("right_vectors").get<std::vector<std::vector<double>>>();
    m.dimension = b.vocabulary.size();
    m.vocabulary_fingerprint = b.vocabulary.fingerprint();
    for (const auto& v : m.right_vectors) {
      if (v.size() != m.dimension) throw DataError("LSA vector length mismatch");
    }
    b.lsa = std::move(m);
  }
  return b;
}

inline nlohmann::ordered_json Featurizer::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "bullyscope.featurizer";
  j["version"] = kFeaturizerFormatVersion;
  j["config"] = feature_config_to_json(config_);
  auto groups = nlohmann::ordered_json::array();
  for (const auto& g : schema_.groups()) {
    nlohmann::ordered_json gj;
    gj["name"] = g.name;
    gj["size"] = g.size;
    gj["kind"] = g.kind == ComponentKind::binary ? "binary" : "continuous";
    gj["detail"] = g.detail;
    groups.push_back(std::move(gj));
  }
  j["schema"] = {{"groups", std::move(groups)}, {"fingerprint", fingerprint_}};
  j["caption_text"] = caption_ ? text_block_to_json(*caption_) : nlohmann::ordered_json();
  j["comment_text"] = comments_ ? text_block_to_json(*comments_) : nlohmann::ordered_json();
  return j;
}

inline Featurizer Featurizer::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "bullyscope.featurizer") {
      throw DataError("not a featurizer document");
    }
    if (j.at("version").get<int>() != kFeaturizerFormatVersion) {
      throw DataError("unsupported featurizer version");
    }
    Featurizer f;
    f.config_ = feature_config_from_json(j.at("config"));
    if (!j.at("caption_text").is_null()) f.caption_ = text_block_from_json(j.at("caption_text"));
    if (!j.at("comment_text").is_null()) f.comments_ = text_block_from_json(j.at("comment_text"));
    f.build_schema();
    if (f.fingerprint_ != j.at("schema").at("fingerprint").get<std::string>()) {
      throw DataError("featurizer schema fingerprint mismatch");
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("featurizer document: ") + e.what());
  }
}

}  // namespace bullyscope

#endif  // BULLYSCOPE_FEATURES_HPP
