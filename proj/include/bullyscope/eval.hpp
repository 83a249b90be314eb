#ifndef BULLYSCOPE_EVAL_HPP
#define BULLYSCOPE_EVAL_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "features.hpp"
#include "io.hpp"
#include "labels.hpp"
#include "models.hpp"
#include "numerics/rng.hpp"
#include "resources.hpp"
#include "session.hpp"

namespace bullyscope {

// ---- folds -----------------------------------------------------------------

struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> fold_of;  // per example, input order
  std::map<std::string, std::size_t> assignments;
  std::vector<std::string> warnings;

  std::vector<std::size_t> test_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
      if (fold_of[i] == fold) out.push_back(i);
    }
    return out;
  }

  std::vector<std::size_t> train_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
      if (fold_of[i] != fold) out.push_back(i);
    }
    return out;
  }
};

/// Class-stratified k-fold partition. Each class is shuffled and dealt
/// round-robin, smallest class first, with the dealing position carried
/// across classes so fold sizes stay within one of each other.
inline FoldPlan stratified_kfold(std::span<const std::string> ids, std::span<const int> labels,
                                 std::size_t k, std::uint64_t seed) {
  if (ids.size() != labels.size()) throw DataError("stratified_kfold: id/label mismatch");
  if (k < 2) throw UsageError("stratified_kfold: k must be >= 2");
  if (k > labels.size()) {
    throw UsageError("stratified_kfold: k=" + std::to_string(k) + " exceeds " +
                     std::to_string(labels.size()) + " examples");
  }
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.fold_of.assign(labels.size(), 0);

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  std::vector<std::pair<int, std::vector<std::size_t>>> classes(by_class.begin(), by_class.end());
  std::stable_sort(classes.begin(), classes.end(), [](const auto& a, const auto& b) {
    return a.second.size() < b.second.size();
  });

  Rng rng(seed, "stratified_kfold");
  std::size_t next = 0;
  for (auto& [label, members] : classes) {
    if (members.size() < k) {
      plan.warnings.push_back("class " + std::to_string(label) + " has only " +
                              std::to_string(members.size()) + " examples for " +
                              std::to_string(k) + " folds");
    }
    rng.shuffle(members);
    for (std::size_t i : members) {
      plan.fold_of[i] = next;
      next = (next + 1) % k;
    }
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!plan.assignments.emplace(ids[i], plan.fold_of[i]).second) {
      throw DataError("stratified_kfold: duplicate id '" + ids[i] + "'");
    }
  }
  return plan;
}

/// Training indices followed by uniform draws (with replacement) from the
/// smaller classes until every class matches the largest one.
inline std::vector<std::size_t> oversample_minority(std::span<const std::size_t> train,
                                                    std::span<const int> labels,
                                                    std::uint64_t seed) {
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i : train) by_class[labels[i]].push_back(i);
  if (by_class.size() < 2) throw DataError("oversample: single-class fold");
  std::size_t largest = 0;
  for (const auto& [c, members] : by_class) largest = std::max(largest, members.size());
  std::vector<std::size_t> out(train.begin(), train.end());
  Rng rng(seed, "oversample");
  for (const auto& [c, members] : by_class) {
    for (std::size_t n = members.size(); n < largest; ++n) {
      out.push_back(members[static_cast<std::size_t>(rng.below(members.size()))]);
    }
  }
  return out;
}

// ---- metrics ---------------------------------------------------------------

struct Metrics {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Precision, recall and F1 of `positive`; a zero denominator yields 0.
inline Metrics metrics(std::span<const int> predicted, std::span<const int> actual,
                       int positive = 1) {
  if (predicted.size() != actual.size() || predicted.empty()) {
    throw DataError("metrics: need equal, non-empty prediction and label lists");
  }
  Metrics m;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] == positive;
    const bool a = actual[i] == positive;
    if (p && a) ++m.tp;
    else if (p) ++m.fp;
    else if (a) ++m.fn;
    else ++m.tn;
  }
  const auto tp = static_cast<double>(m.tp);
  m.precision = m.tp + m.fp == 0 ? 0.0 : tp / static_cast<double>(m.tp + m.fp);
  m.recall = m.tp + m.fn == 0 ? 0.0 : tp / static_cast<double>(m.tp + m.fn);
  m.f1 = m.precision + m.recall == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

// ---- configuration -----------------------------------------------------------

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

struct ExperimentConfig {
  LabelKind target = LabelKind::bullying;
  ModelKind classifier = ModelKind::svm;
  std::size_t folds = 5;
  std::uint64_t seed = 1;
  bool oversample = true;
  FeatureConfig features = detection_feature_config();
  TrainConfig train;
  // Prediction protocol only.
  LadderLevel level = LadderLevel::comments;
  std::size_t k_comments = 15;
  // Execution only; never changes results.
  std::size_t jobs = 1;
  std::optional<Lexicon> stopwords;  // bundled list when unset
};

inline ExperimentConfig default_prediction_config() {
  ExperimentConfig c;
  c.classifier = ModelKind::maxent;
  return c;
}

namespace detail {

inline bool parse_switch(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw UsageError("config key '" + key + "': expected on/off, got '" + v + "'");
}

inline std::uint64_t parse_unsigned(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long n = std::stoull(v, &pos);
    if (pos != v.size() || v.front() == '-') throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw UsageError("config key '" + key + "': expected a non-negative integer, got '" +
                     v + "'");
  }
}

inline double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw UsageError("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

inline std::string on_off(bool b) { return b ? "on" : "off"; }

}  // namespace detail

/// Applies one key/value setting; unknown keys are usage errors.
inline void apply_setting(ExperimentConfig& c, const std::string& key,
                          const std::string& value) {
  using namespace detail;
  auto& f = c.features;
  if (key == "target") c.target = parse_label_kind(value);
  else if (key == "classifier") c.classifier = parse_model_kind(value);
  else if (key == "folds") c.folds = parse_unsigned(key, value);
  else if (key == "seed") c.seed = parse_unsigned(key, value);
  else if (key == "oversample") c.oversample = parse_switch(key, value);
  else if (key == "ngrams") {
    const auto n = parse_unsigned(key, value);
    if (n != 1 && n != 2) throw UsageError("ngrams must be 1 or 2");
    f.text.bigrams = n == 2;
  } else if (key == "stopwords") f.text.remove_stopwords = parse_switch(key, value);
  else if (key == "normalize") f.text.normalize = parse_switch(key, value);
  else if (key == "min_df") f.text.min_df = parse_unsigned(key, value);
  else if (key == "lsa") f.text.lsa = parse_switch(key, value);
  else if (key == "lsa_rank") f.text.lsa_rank = parse_unsigned(key, value);
  else if (key == "caption") f.caption_in_comments = parse_switch(key, value);
  else if (key == "social") f.social = parse_switch(key, value);
  else if (key == "image") f.image = parse_switch(key, value);
  else if (key == "post_time") f.post_time = parse_switch(key, value);
  else if (key == "temporal") f.temporal = parse_switch(key, value);
  else if (key == "image_multi_hot") f.image_multi_hot = parse_switch(key, value);
  else if (key == "lambda") c.train.lambda = parse_real(key, value);
  else if (key == "epochs") c.train.epochs = parse_unsigned(key, value);
  else if (key == "batch_size") c.train.batch_size = parse_unsigned(key, value);
  else if (key == "learning_rate") c.train.learning_rate = parse_real(key, value);
  else if (key == "level") c.level = parse_ladder_level(value);
  else if (key == "k_comments") c.k_comments = parse_unsigned(key, value);
  else throw UsageError("unknown config key '" + key + "'");
}

/// Reads "key = value" lines; '#' starts a comment line.
inline std::vector<std::pair<std::string, std::string>> parse_settings(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t line_no = 0;
  for (const auto& line : io::split_lines(text)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    out.emplace_back(std::string(trim(t.substr(0, eq))), std::string(trim(t.substr(eq + 1))));
  }
  return out;
}

/// Every result-affecting setting, in a fixed order.
inline ConfigEcho echo(const ExperimentConfig& c, bool prediction) {
  using detail::on_off;
  const auto& f = c.features;
  ConfigEcho e = {
      {"target", std::string(to_string(c.target))},
      {"classifier", std::string(to_string(c.classifier))},
      {"folds", std::to_string(c.folds)},
      {"seed", std::to_string(c.seed)},
      {"oversample", on_off(c.oversample)},
      {"ngrams", f.text.bigrams ? "2" : "1"},
      {"stopwords", on_off(f.text.remove_stopwords)},
      {"normalize", on_off(f.text.normalize)},
      {"min_df", std::to_string(f.text.min_df)},
      {"lsa", on_off(f.text.lsa)},
      {"lsa_rank", std::to_string(f.text.lsa_rank)},
  };
  if (prediction) {
    e.emplace_back("level", std::string(to_string(c.level)));
    e.emplace_back("k_comments", std::to_string(c.k_comments));
  } else {
    e.emplace_back("caption", on_off(f.caption_in_comments));
    e.emplace_back("social", on_off(f.social));
    e.emplace_back("image", on_off(f.image));
    e.emplace_back("post_time", on_off(f.post_time));
    e.emplace_back("temporal", on_off(f.temporal));
    e.emplace_back("image_multi_hot", on_off(f.image_multi_hot));
  }
  e.emplace_back("lambda", io::format_double(c.train.lambda));
  e.emplace_back("epochs", std::to_string(c.train.epochs));
  e.emplace_back("batch_size", std::to_string(c.train.batch_size));
  e.emplace_back("learning_rate", io::format_double(c.train.learning_rate));
  if (!c.stopwords) {
    e.emplace_back("stopword_list", "bundled");
  } else {
    std::uint64_t h = io::fnv1a64("");
    for (const auto& p : c.stopwords->patterns()) h = io::fnv1a64(p + "\n", h);
    e.emplace_back("stopword_list", io::to_hex(h));
  }
  return e;
}

// ---- reports -----------------------------------------------------------------

struct FoldResult {
  std::size_t fold = 0;
  Metrics metrics;
  std::size_t train_size = 0;
  std::size_t balanced_train_size = 0;
  std::size_t test_size = 0;
  std::string schema_fingerprint;
  std::string vocabulary_fingerprint;  // comment text block, "-" when absent
};

struct MeanMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalRow {
  std::string name;
  std::vector<FoldResult> folds;
  MeanMetrics mean;  // macro average over folds
};

struct EvalReport {
  std::string experiment;
  ConfigEcho config;
  std::vector<EvalRow> rows;
  std::vector<std::string> notes;
};

inline std::string report_to_csv(const EvalReport& r) {
  using io::format_double;
  std::string out =
      "experiment,row,fold,precision,recall,f1,tp,fp,fn,tn,train_size,"
      "balanced_train_size,test_size\n";
  for (const auto& row : r.rows) {
    for (const auto& f : row.folds) {
      out += io::csv_escape(r.experiment) + "," + io::csv_escape(row.name) + "," +
             std::to_string(f.fold) + "," + format_double(f.metrics.precision) + "," +
             format_double(f.metrics.recall) + "," + format_double(f.metrics.f1) + "," +
             std::to_string(f.metrics.tp) + "," + std::to_string(f.metrics.fp) + "," +
             std::to_string(f.metrics.fn) + "," + std::to_string(f.metrics.tn) + "," +
             std::to_string(f.train_size) + "," + std::to_string(f.balanced_train_size) +
             "," + std::to_string(f.test_size) + "\n";
    }
    out += io::csv_escape(r.experiment) + "," + io::csv_escape(row.name) + ",mean," +
           format_double(row.mean.precision) + "," + format_double(row.mean.recall) + "," +
           format_double(row.mean.f1) + ",,,,,,,\n";
  }
  return out;
}

inline nlohmann::ordered_json report_to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["experiment"] = r.experiment;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  j["config"] = std::move(cfg);
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json rj;
    rj["name"] = row.name;
    auto folds = nlohmann::ordered_json::array();
    for (const auto& f : row.folds) {
      nlohmann::ordered_json fj;
      fj["fold"] = f.fold;
      fj["precision"] = f.metrics.precision;
      fj["recall"] = f.metrics.recall;
      fj["f1"] = f.metrics.f1;
      fj["tp"] = f.metrics.tp;
      fj["fp"] = f.metrics.fp;
      fj["fn"] = f.metrics.fn;
      fj["tn"] = f.metrics.tn;
      fj["train_size"] = f.train_size;
      fj["balanced_train_size"] = f.balanced_train_size;
      fj["test_size"] = f.test_size;
      fj["schema_fingerprint"] = f.schema_fingerprint;
      fj["vocabulary_fingerprint"] = f.vocabulary_fingerprint;
      folds.push_back(std::move(fj));
    }
    rj["folds"] = std::move(folds);
    rj["mean"] = {{"precision", row.mean.precision},
                  {"recall", row.mean.recall},
                  {"f1", row.mean.f1}};
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  j["notes"] = r.notes;
  return j;
}

// ---- experiment machinery --------------------------------------------------------

using ImageLabelMap = std::map<std::string, ImageLabel>;

/// Image labels resolved from the votes embedded in corpus records; sessions
/// without votes are absent from the map.
inline ImageLabelMap image_labels_from_corpus(const Corpus& corpus) {
  ImageLabelMap out;
  for (const auto& s : corpus.sessions) {
    if (!s.image_category_votes.empty()) {
      out.emplace(s.session_id, image_category_majority(s.image_category_votes, s.session_id));
    }
  }
  return out;
}

/// Labeled sessions joined with their targets, in corpus order.
struct LabeledSet {
  std::vector<const MediaSession*> sessions;
  std::vector<std::string> ids;
  std::vector<int> y;
  std::vector<std::string> notes;
};

inline LabeledSet join_labels(const Corpus& corpus, const std::vector<AggregatedLabel>& labels,
                              LabelKind target) {
  std::unordered_map<std::string, const AggregatedLabel*> by_id;
  for (const auto& l : labels) by_id.emplace(l.session_id, &l);
  LabeledSet set;
  std::size_t unlabeled = 0;
  for (const auto& s : corpus.sessions) {
    auto it = by_id.find(s.session_id);
    if (it == by_id.end()) {
      ++unlabeled;
      continue;
    }
    set.sessions.push_back(&s);
    set.ids.push_back(s.session_id);
    set.y.push_back(it->second->positive(target) ? 1 : 0);
  }
  if (unlabeled > 0) {
    set.notes.push_back(std::to_string(unlabeled) + " sessions without labels skipped");
  }
  if (set.sessions.empty()) throw DataError("no labeled sessions in corpus");
  return set;
}

inline LinearModel train_model(ModelKind kind, std::span<const FeatureVector> x,
                               std::span<const int> y, const FeatureSchema& schema,
                               const TrainConfig& cfg) {
  switch (kind) {
    case ModelKind::svm: return train_svm(x, y, cfg);
    case ModelKind::logistic: return train_logistic(x, y, cfg);
    case ModelKind::maxent: return train_maxent(x, y, cfg);
    case ModelKind::naive_bayes: {
      const auto kinds = schema.component_kinds();
      return train_naive_bayes(x, y, kinds, cfg);
    }
  }
  throw UsageError("unknown classifier");
}

inline const ImageLabel* find_image(const ImageLabelMap* images, const std::string& id) {
  if (images == nullptr) return nullptr;
  auto it = images->find(id);
  return it == images->end() ? nullptr : &it->second;
}

/// Runs `fn(i)` for i in [0, n) on up to `jobs` threads. Results must be
/// written by index; the first failure (lowest index) is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Everything fitted inside one training fold.
struct FoldArtifacts {
  Featurizer featurizer;
  LinearModel model;
  std::vector<std::size_t> balanced_train;
};

inline FoldArtifacts fit_fold(const LabeledSet& data, std::span<const std::size_t> train,
                              const FeatureConfig& features, const ExperimentConfig& cfg,
                              const ImageLabelMap* images, std::uint64_t fold_seed) {
  static const Lexicon kBundled = resources::default_stopwords();
  const Lexicon& stop = cfg.stopwords ? *cfg.stopwords : kBundled;
  Rng seeds(fold_seed, "fold");
  const std::uint64_t feature_seed = seeds.stream("features").next();
  const std::uint64_t sample_seed = seeds.stream("oversample").next();
  const std::uint64_t model_seed = seeds.stream("model").next();

  std::vector<const MediaSession*> train_sessions;
  for (std::size_t i : train) train_sessions.push_back(data.sessions[i]);
  FoldArtifacts a{Featurizer::fit(train_sessions, features, stop, feature_seed), {}, {}};

  a.balanced_train = cfg.oversample ? oversample_minority(train, data.y, sample_seed)
                                    : std::vector<std::size_t>(train.begin(), train.end());
  std::unordered_map<std::size_t, FeatureVector> cache;
  std::vector<FeatureVector> x;
  std::vector<int> y;
  x.reserve(a.balanced_train.size());
  for (std::size_t i : a.balanced_train) {
    auto it = cache.find(i);
    if (it == cache.end()) {
      it = cache.emplace(i, a.featurizer.transform(*data.sessions[i],
                                                   find_image(images, data.ids[i])))
               .first;
    }
    x.push_back(it->second);
    y.push_back(data.y[i]);
  }
  TrainConfig tc = cfg.train;
  tc.seed = model_seed;
  a.model = train_model(cfg.classifier, x, y, a.featurizer.schema(), tc);
  return a;
}

inline EvalRow cross_validate(const LabeledSet& data, const FoldPlan& plan,
                              const FeatureConfig& features, const ExperimentConfig& cfg,
                              const ImageLabelMap* images, std::string name) {
  EvalRow row;
  row.name = std::move(name);
  row.folds.resize(plan.k);
  parallel_for(plan.k, cfg.jobs, [&](std::size_t f) {
    const auto train = plan.train_indices(f);
    const auto test = plan.test_indices(f);
    const std::uint64_t fold_seed = Rng(cfg.seed, "fold/" + std::to_string(f)).next();
    FoldArtifacts a = fit_fold(data, train, features, cfg, images, fold_seed);
    std::vector<int> predicted, actual;
    for (std::size_t i : test) {
      const FeatureVector fv =
          a.featurizer.transform(*data.sessions[i], find_image(images, data.ids[i]));
      predicted.push_back(predict(a.model, fv).label);
      actual.push_back(data.y[i]);
    }
    FoldResult& r = row.folds[f];
    r.fold = f;
    r.metrics = metrics(predicted, actual, 1);
    r.train_size = train.size();
    r.balanced_train_size = a.balanced_train.size();
    r.test_size = test.size();
    r.schema_fingerprint = a.featurizer.schema().fingerprint();
    r.vocabulary_fingerprint = a.featurizer.comment_block()
                                   ? a.featurizer.comment_block()->vocabulary.fingerprint()
                                   : "-";
  });
  for (const auto& f : row.folds) {
    row.mean.precision += f.metrics.precision;
    row.mean.recall += f.metrics.recall;
    row.mean.f1 += f.metrics.f1;
  }
  const auto k = static_cast<double>(row.folds.size());
  row.mean.precision /= k;
  row.mean.recall /= k;
  row.mean.f1 /= k;
  return row;
}

inline void require_images(const LabeledSet& data, const ImageLabelMap* images) {
  for (const auto& id : data.ids) {
    if (find_image(images, id) == nullptr) {
      throw DataError("missing image label for session '" + id + "'");
    }
  }
}

/// Text-based detection: per fold, fit vocabulary (and LSA) on the training
/// side, oversample it, train, and score the held-out fold.
inline EvalReport run_detection_experiment(const Corpus& corpus,
                                           const std::vector<AggregatedLabel>& labels,
                                           const ExperimentConfig& cfg,
                                           const ImageLabelMap* images = nullptr) {
  LabeledSet data = join_labels(corpus, labels, cfg.target);
  if (cfg.features.image) require_images(data, images);
  FoldPlan plan = stratified_kfold(data.ids, data.y, cfg.folds, cfg.seed);
  EvalReport report;
  report.experiment = "detect";
  report.config = echo(cfg, false);
  report.notes = data.notes;
  report.notes.insert(report.notes.end(), plan.warnings.begin(), plan.warnings.end());
  report.rows.push_back(cross_validate(data, plan, cfg.features, cfg, images, "detect"));
  return report;
}

inline std::string ladder_row_name(LadderLevel level, std::size_t k) {
  if (level == LadderLevel::comments) return "comments(k=" + std::to_string(k) + ")";
  return std::string(to_string(level));
}

/// Prediction ladder: one row per cumulative feature level up to and
/// including cfg.level. Comment text enters only at the comments level and
/// only from the first cfg.k_comments comments.
inline EvalReport run_prediction_experiment(const Corpus& corpus,
                                            const std::vector<AggregatedLabel>& labels,
                                            const ImageLabelMap& images,
                                            const ExperimentConfig& cfg) {
  LabeledSet data = join_labels(corpus, labels, cfg.target);
  require_images(data, &images);
  FoldPlan plan = stratified_kfold(data.ids, data.y, cfg.folds, cfg.seed);
  EvalReport report;
  report.experiment = "predict";
  report.config = echo(cfg, true);
  report.notes = data.notes;
  report.notes.insert(report.notes.end(), plan.warnings.begin(), plan.warnings.end());
  for (auto level : kLadder) {
    FeatureConfig features = prediction_feature_config(level, cfg.k_comments);
    features.text = cfg.features.text;
    report.rows.push_back(cross_validate(data, plan, features, cfg, &images,
                                         ladder_row_name(level, cfg.k_comments)));
    if (level == cfg.level) break;
  }
  return report;
}

/// Copy of `labels` with targets permuted across sessions (a null-model
/// control that keeps the base rate).
inline std::vector<AggregatedLabel> permute_labels(std::vector<AggregatedLabel> labels,
                                                   std::uint64_t seed) {
  std::vector<std::size_t> order(labels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed, "permute_labels");
  rng.shuffle(order);
  std::vector<AggregatedLabel> out = labels;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& src = labels[order[i]];
    auto& dst = out[i];
    dst.n_raters = src.n_raters;
    dst.aggression_votes = src.aggression_votes;
    dst.bullying_votes = src.bullying_votes;
    dst.aggression_confidence = src.aggression_confidence;
    dst.bullying_confidence = src.bullying_confidence;
    dst.is_aggression = src.is_aggression;
    dst.is_bullying = src.is_bullying;
  }
  return out;
}

// ---- whole-corpus pipelines (train / predict commands) -----------------------------

struct Pipeline {
  std::string protocol;  // "detect" or "predict"
  ConfigEcho config;
  Featurizer featurizer;
  LinearModel model;
};

inline Pipeline train_pipeline(const Corpus& corpus, const std::vector<AggregatedLabel>& labels,
                               const ExperimentConfig& cfg, bool prediction,
                               const ImageLabelMap* images = nullptr) {
  LabeledSet data = join_labels(corpus, labels, cfg.target);
  FeatureConfig features = cfg.features;
  if (prediction) {
    features = prediction_feature_config(cfg.level, cfg.k_comments);
    features.text = cfg.features.text;
  }
  if (features.image) require_images(data, images);
  std::vector<std::size_t> all(data.y.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  FoldArtifacts a = fit_fold(data, all, features, cfg, images, Rng(cfg.seed, "train").next());
  return Pipeline{prediction ? "predict" : "detect", echo(cfg, prediction),
                  std::move(a.featurizer), std::move(a.model)};
}

inline nlohmann::ordered_json pipeline_to_json(const Pipeline& p) {
  nlohmann::ordered_json j;
  j["format"] = "bullyscope.pipeline";
  j["version"] = 1;
  j["protocol"] = p.protocol;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : p.config) cfg[k] = v;
  j["config"] = std::move(cfg);
  j["featurizer"] = p.featurizer.to_json();
  j["model"] = model_to_json(p.model);
  return j;
}

inline Pipeline pipeline_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "bullyscope.pipeline" ||
        j.at("version").get<int>() != 1) {
      throw DataError("not a version-1 pipeline document");
    }
    Pipeline p{j.at("protocol").get<std::string>(), {},
               Featurizer::from_json(j.at("featurizer")), model_from_json(j.at("model"))};
    for (const auto& [k, v] : j.at("config").items()) p.config.emplace_back(k, v.get<std::string>());
    if (p.model.schema_fingerprint != p.featurizer.schema().fingerprint()) {
      throw DataError("pipeline model and featurizer disagree on the schema");
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("pipeline document: ") + e.what());
  }
}

}  // namespace bullyscope

#endif  // BULLYSCOPE_EVAL_HPP
