#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <bullyscope.hpp>

namespace fs = std::filesystem;
using namespace bullyscope;

namespace {

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void require_file(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) throw UsageError(std::string(what) + " not found: " + path);
}

std::string lexicon_text(const Lexicon& lex) {
  std::string out;
  for (const auto& p : lex.patterns()) out += p + "\n";
  return out;
}

std::string json_text(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

// ---- experiment flags -------------------------------------------------------

// Every experiment setting is exposed as a flag named after its config key
// (underscores become dashes). Precedence: defaults < --config < flags.
struct ExperimentFlags {
  ExperimentConfig defaults;
  bool prediction = false;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_file;
  std::string stopword_file;
  std::size_t jobs = 1;

  void attach(CLI::App* app) {
    for (const auto& [key, value] : echo(defaults, prediction)) {
      if (key == "stopword_list") continue;
      std::string flag = "--" + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      values[key] = value;
      options[key] = app->add_option(flag, values[key], "experiment setting '" + key + "'")
                         ->capture_default_str();
    }
    app->add_option("--config", config_file, "flat key = value settings file");
    app->add_option("--stopword-list", stopword_file,
                    "stop-word lexicon file (default: bundled list)");
    app->add_option("--jobs", jobs, "parallel folds; never changes results")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }

  ExperimentConfig resolve() const {
    ExperimentConfig c = defaults;
    if (!config_file.empty()) {
      require_file(config_file, "config file");
      for (const auto& [k, v] : parse_settings(io::read_file(config_file))) {
        apply_setting(c, k, v);
      }
    }
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) apply_setting(c, key, values.at(key));
    }
    if (!stopword_file.empty()) {
      require_file(stopword_file, "stop-word list");
      c.stopwords = load_lexicon(stopword_file);
    }
    c.jobs = jobs;
    if (c.folds < 2) throw UsageError("--folds must be >= 2");
    return c;
  }
};

struct DataPaths {
  std::string corpus;
  std::string labels;
  std::string images;

  void attach(CLI::App* app) {
    app->add_option("--corpus", corpus, "JSON-lines corpus")->required();
    app->add_option("--labels", labels, "raw votes or aggregated labels (JSON lines)")
        ->required();
    app->add_option("--images", images,
                    "image-category votes (JSON lines; default: votes in the corpus)");
  }

  void validate() const {
    require_file(corpus, "corpus");
    require_file(labels, "labels");
    if (!images.empty()) require_file(images, "image labels");
  }

  ImageLabelMap load_images(const Corpus& c) const {
    if (images.empty()) return image_labels_from_corpus(c);
    return resolve_image_votes(parse_image_votes(io::read_file(images)));
  }
};

// ---- commands ---------------------------------------------------------------

struct IngestArgs {
  std::string corpus, out;
};

int cmd_ingest(const IngestArgs& a) {
  require_file(a.corpus, "corpus");
  const Corpus c = load_corpus(a.corpus);
  print_warnings(c.ingest_warnings);
  std::size_t comments = 0;
  for (const auto& s : c.sessions) comments += s.comments.size();
  if (!a.out.empty()) write_corpus(c, a.out);
  std::cout << "ingest: " << c.sessions.size() << " sessions, " << comments << " comments, "
            << c.ingest_warnings.size() << " warnings\n";
  return 0;
}

struct FilterArgs {
  std::string corpus, profanity, out;
  std::size_t min_comments = 15;
};

int cmd_filter(const FilterArgs& a) {
  require_file(a.corpus, "corpus");
  require_file(a.profanity, "profanity lexicon");
  const Lexicon profanity = load_lexicon(a.profanity);
  const Corpus c = load_corpus(a.corpus);
  print_warnings(c.ingest_warnings);
  const Corpus kept = filter_sessions(c, a.min_comments, profanity);
  write_corpus(kept, a.out);
  std::cout << "filter: kept " << kept.sessions.size() << " of " << c.sessions.size()
            << " sessions -> " << a.out << "\n";
  return 0;
}

struct LabelsArgs {
  std::string votes, out, report;
  double confidence = 0.6;
  std::string target = "bullying";
};

std::optional<double> kappa_of(const std::vector<AggregatedLabel>& labels, LabelKind kind,
                               std::vector<std::string>& notes) {
  if (labels.empty()) return std::nullopt;
  std::vector<std::size_t> yes;
  for (const auto& l : labels) {
    if (l.n_raters != labels.front().n_raters) {
      notes.push_back("kappa " + std::string(to_string(kind)) +
                      ": undefined (unequal rater counts)");
      return std::nullopt;
    }
    yes.push_back(l.votes(kind));
  }
  try {
    return fleiss_kappa(yes, labels.front().n_raters);
  } catch (const std::exception& e) {
    notes.push_back("kappa " + std::string(to_string(kind)) + ": " + e.what());
    return std::nullopt;
  }
}

int cmd_labels(const LabelsArgs& a) {
  require_file(a.votes, "votes");
  const LabelKind kind = parse_label_kind(a.target);
  const AggregationResult agg = aggregate_all(load_label_records(a.votes));
  const auto kept = filter_by_confidence(agg.labels, a.confidence, kind);
  std::vector<std::string> notes;
  const auto kb = kappa_of(agg.labels, LabelKind::bullying, notes);
  const auto ka = kappa_of(agg.labels, LabelKind::aggression, notes);

  nlohmann::ordered_json r;
  r["input_sessions"] = agg.labels.size();
  r["confidence_threshold"] = a.confidence;
  r["confidence_target"] = a.target;
  r["kept"] = kept.size();
  r["dropped"] = agg.labels.size() - kept.size();
  r["kappa_bullying"] = kb ? nlohmann::ordered_json(*kb) : nlohmann::ordered_json(nullptr);
  r["kappa_aggression"] = ka ? nlohmann::ordered_json(*ka) : nlohmann::ordered_json(nullptr);
  r["bullying_exceeds_aggression"] = agg.violations;
  r["notes"] = notes;

  io::write_file_atomic(a.out, aggregated_to_jsonl(kept));
  const std::string report = a.report.empty() ? a.out + ".report.json" : a.report;
  io::write_file_atomic(report, json_text(r));
  std::cout << "labels: kept " << kept.size() << ", dropped " << agg.labels.size() - kept.size()
            << " of " << agg.labels.size() << " sessions; kappa(bullying)="
            << (kb ? io::format_double(*kb) : "null") << " -> " << a.out << "\n";
  return 0;
}

struct AnalyzeArgs {
  std::string corpus, labels, images, profanity, categories, out_dir = "reports";
  std::vector<std::string> reports = {"all"};
  std::vector<std::int64_t> thresholds = default_thresholds();
  std::string target = "bullying";
  bool plot_data = false;
};

const std::vector<std::string>& report_names() {
  static const std::vector<std::string> kNames = {
      "vote_distribution", "vote_heatmap", "negativity_bins", "temporal_correlation",
      "graph_properties", "liwc_ratio", "image_categories"};
  return kNames;
}

int cmd_analyze(const AnalyzeArgs& a) {
  std::set<std::string> wanted;
  for (const auto& r : a.reports) {
    if (r == "all") {
      wanted.insert(report_names().begin(), report_names().end());
    } else if (std::find(report_names().begin(), report_names().end(), r) ==
               report_names().end()) {
      throw UsageError("unknown report '" + r + "'");
    } else {
      wanted.insert(r);
    }
  }
  require_file(a.corpus, "corpus");
  require_file(a.labels, "labels");
  if (wanted.count("negativity_bins") && a.profanity.empty()) {
    throw UsageError("negativity_bins needs --profanity");
  }
  if (!a.profanity.empty()) require_file(a.profanity, "profanity lexicon");
  if (!a.images.empty()) require_file(a.images, "image labels");
  if (!a.categories.empty()) require_file(a.categories, "category lexicon");

  const Corpus corpus = load_corpus(a.corpus);
  print_warnings(corpus.ingest_warnings);
  const auto labels = load_any_labels(a.labels);
  const LabelKind kind = parse_label_kind(a.target);

  std::vector<Report> reports;
  for (const auto& name : report_names()) {
    if (!wanted.count(name)) continue;
    if (name == "vote_distribution") reports.push_back(vote_distribution(labels));
    if (name == "vote_heatmap") reports.push_back(vote_heatmap(labels));
    if (name == "negativity_bins") {
      reports.push_back(negativity_bins_report(corpus, labels, load_lexicon(a.profanity)));
    }
    if (name == "temporal_correlation") {
      reports.push_back(temporal_correlation_report(corpus, labels, a.thresholds));
    }
    if (name == "graph_properties") reports.push_back(graph_property_table(corpus, labels));
    if (name == "liwc_ratio") {
      const CategoryLexicon cats =
          a.categories.empty() ? resources::demo_categories() : load_category_lexicon(a.categories);
      reports.push_back(liwc_ratio_report(corpus, labels, cats, kind));
    }
    if (name == "image_categories") {
      const auto images = a.images.empty()
                              ? image_labels_from_corpus(corpus)
                              : resolve_image_votes(parse_image_votes(io::read_file(a.images)));
      reports.push_back(image_category_report(corpus, labels, images));
    }
  }
  const fs::path dir(a.out_dir);
  for (const auto& r : reports) {
    io::write_file_atomic(dir / (r.name + ".csv"), report_to_csv(r));
    io::write_file_atomic(dir / (r.name + ".json"), json_text(report_to_json(r)));
    if (a.plot_data) {
      for (const auto& [column, body] : report_plot_series(r)) {
        io::write_file_atomic(dir / "plot" / (r.name + "." + column + ".tsv"), body);
      }
    }
  }
  std::cout << "analyze: wrote " << reports.size() << " reports -> " << a.out_dir << "\n";
  return 0;
}

struct EvalArgs {
  DataPaths data;
  ExperimentFlags flags;
  std::string out_dir = ".";
};

int cmd_eval(const EvalArgs& a) {
  a.data.validate();
  const ExperimentConfig cfg = a.flags.resolve();
  const Corpus corpus = load_corpus(a.data.corpus);
  print_warnings(corpus.ingest_warnings);
  const auto labels = load_any_labels(a.data.labels);
  const ImageLabelMap images = a.data.load_images(corpus);
  EvalReport report = a.flags.prediction
                          ? run_prediction_experiment(corpus, labels, images, cfg)
                          : run_detection_experiment(corpus, labels, cfg, &images);
  const fs::path dir(a.out_dir);
  io::write_file_atomic(dir / (report.experiment + "_report.csv"), report_to_csv(report));
  io::write_file_atomic(dir / (report.experiment + "_report.json"),
                        json_text(report_to_json(report)));
  const auto& last = report.rows.back();
  std::cout << "eval " << report.experiment << ": " << last.name
            << " precision=" << io::format_double(last.mean.precision)
            << " recall=" << io::format_double(last.mean.recall)
            << " f1=" << io::format_double(last.mean.f1) << " -> " << a.out_dir << "\n";
  return 0;
}

struct TrainArgs {
  DataPaths data;
  ExperimentFlags flags;
  std::string out;
};

int cmd_train(const TrainArgs& a) {
  a.data.validate();
  const ExperimentConfig cfg = a.flags.resolve();
  const Corpus corpus = load_corpus(a.data.corpus);
  print_warnings(corpus.ingest_warnings);
  const auto labels = load_any_labels(a.data.labels);
  const ImageLabelMap images = a.data.load_images(corpus);
  const Pipeline p = train_pipeline(corpus, labels, cfg, a.flags.prediction, &images);
  io::write_file_atomic(a.out, json_text(pipeline_to_json(p)));
  std::cout << "train " << p.protocol << ": " << to_string(p.model.kind) << " on "
            << p.featurizer.schema().total_size() << " features -> " << a.out << "\n";
  return 0;
}

struct PredictArgs {
  std::string model, corpus, images, out;
};

int cmd_predict(const PredictArgs& a) {
  require_file(a.model, "model");
  require_file(a.corpus, "corpus");
  if (!a.images.empty()) require_file(a.images, "image labels");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_file(a.model));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
  const Pipeline p = pipeline_from_json(j);
  const Corpus corpus = load_corpus(a.corpus);
  print_warnings(corpus.ingest_warnings);
  const ImageLabelMap images =
      a.images.empty() ? image_labels_from_corpus(corpus)
                       : resolve_image_votes(parse_image_votes(io::read_file(a.images)));
  std::string out = "session_id,label,score\n";
  std::size_t positives = 0;
  for (const auto& s : corpus.sessions) {
    const FeatureVector fv =
        p.featurizer.transform(s, find_image(&images, s.session_id));
    const Prediction pr = predict(p.model, fv);
    positives += pr.label == 1 ? 1 : 0;
    out += io::csv_escape(s.session_id) + "," + std::to_string(pr.label) + "," +
           io::format_double(pr.score) + "\n";
  }
  io::write_file_atomic(a.out, out);
  std::cout << "predict: " << positives << " of " << corpus.sessions.size()
            << " sessions predicted positive -> " << a.out << "\n";
  return 0;
}

struct SynthArgs {
  SyntheticSpec spec;
  std::uint64_t seed = 1;
  std::string out_dir = "synthetic";
};

int cmd_synth(const SynthArgs& a) {
  const SyntheticCorpus s = generate_synthetic_corpus(a.spec, a.seed);
  const fs::path dir(a.out_dir);
  write_corpus(s.corpus, dir / "corpus.jsonl");
  io::write_file_atomic(dir / "votes.jsonl", label_records_to_jsonl(s.labels));
  io::write_file_atomic(dir / "image_votes.jsonl", image_votes_to_jsonl(s.image_votes));
  io::write_file_atomic(dir / "profanity.txt", lexicon_text(s.profanity));
  std::size_t positives = 0;
  for (bool t : s.truth) positives += t ? 1 : 0;
  std::cout << "synth: " << s.corpus.sessions.size() << " sessions (" << positives
            << " planted positive) -> " << a.out_dir << "\n";
  return 0;
}

void add_experiment_commands(CLI::App& parent, const char* verb, EvalArgs* eval,
                             TrainArgs* train, std::function<void(bool)> run) {
  for (bool prediction : {false, true}) {
    const char* name = prediction ? "predict" : "detect";
    auto* sub = parent.add_subcommand(
        name, prediction ? std::string(verb) + " the incremental prediction protocol"
                         : std::string(verb) + " the text detection protocol");
    ExperimentFlags& flags = eval ? (prediction ? eval[1].flags : eval[0].flags)
                                  : (prediction ? train[1].flags : train[0].flags);
    DataPaths& data = eval ? (prediction ? eval[1].data : eval[0].data)
                           : (prediction ? train[1].data : train[0].data);
    flags.prediction = prediction;
    flags.defaults = prediction ? default_prediction_config() : ExperimentConfig{};
    data.attach(sub);
    flags.attach(sub);
    if (eval) {
      sub->add_option("--out-dir", eval[prediction ? 1 : 0].out_dir,
                      "directory for <protocol>_report.{csv,json}")
          ->capture_default_str();
    } else {
      sub->add_option("--out", train[prediction ? 1 : 0].out, "pipeline model file (JSON)")
          ->required();
    }
    sub->callback([run, prediction] { run(prediction); });
  }
  parent.require_subcommand(1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bullyscope: cyberbullying corpus analysis, detection and prediction"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every command");

  int status = 0;
  auto guarded = [&status](auto&& fn) {
    return [&status, fn] { status = fn(); };
  };

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "validate a corpus and report a summary");
  c_ingest->add_option("--corpus", ingest.corpus, "JSON-lines corpus")->required();
  c_ingest->add_option("--out", ingest.out, "write the normalized corpus here");
  c_ingest->callback(guarded([&] { return cmd_ingest(ingest); }));

  FilterArgs filter;
  auto* c_filter = app.add_subcommand("filter", "keep sessions with enough comments and profanity");
  c_filter->add_option("--corpus", filter.corpus, "JSON-lines corpus")->required();
  c_filter->add_option("--profanity", filter.profanity, "profanity lexicon")->required();
  c_filter->add_option("--min-comments", filter.min_comments, "minimum comments per session")
      ->capture_default_str();
  c_filter->add_option("--out", filter.out, "filtered corpus")->required();
  c_filter->callback(guarded([&] { return cmd_filter(filter); }));

  LabelsArgs labels;
  auto* c_labels = app.add_subcommand("labels", "aggregate rater votes into labels");
  c_labels->add_option("--votes", labels.votes, "per-rater vote records (JSON lines)")
      ->required();
  c_labels->add_option("--confidence", labels.confidence, "minimum trust-weighted confidence")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  c_labels->add_option("--target", labels.target, "label kind the confidence cut applies to")
      ->capture_default_str();
  c_labels->add_option("--out", labels.out, "aggregated labels (JSON lines)")->required();
  c_labels->add_option("--report", labels.report, "aggregation report (default: <out>.report.json)");
  c_labels->callback(guarded([&] { return cmd_labels(labels); }));

  AnalyzeArgs analyze;
  auto* c_analyze = app.add_subcommand("analyze", "descriptive analysis reports");
  c_analyze->add_option("--corpus", analyze.corpus, "JSON-lines corpus")->required();
  c_analyze->add_option("--labels", analyze.labels, "raw votes or aggregated labels")
      ->required();
  c_analyze->add_option("--profanity", analyze.profanity, "profanity lexicon (negativity_bins)");
  c_analyze->add_option("--categories", analyze.categories,
                        "category lexicon (default: bundled demo categories)");
  c_analyze->add_option("--images", analyze.images,
                        "image-category votes (default: votes in the corpus)");
  c_analyze->add_option("--reports", analyze.reports,
                        "reports to build: all, vote_distribution, vote_heatmap, "
                        "negativity_bins, temporal_correlation, graph_properties, "
                        "liwc_ratio, image_categories")
      ->delimiter(',')
      ->capture_default_str();
  c_analyze->add_option("--thresholds", analyze.thresholds, "gap thresholds in seconds")
      ->delimiter(',')
      ->capture_default_str();
  c_analyze->add_option("--target", analyze.target, "label kind for liwc_ratio")
      ->capture_default_str();
  c_analyze->add_option("--out-dir", analyze.out_dir, "output directory")->capture_default_str();
  c_analyze->add_flag("--plot-data", analyze.plot_data, "also write x/y series per column");
  c_analyze->callback(guarded([&] { return cmd_analyze(analyze); }));

  EvalArgs eval[2];
  auto* c_eval = app.add_subcommand("eval", "cross-validated experiments");
  add_experiment_commands(*c_eval, "evaluate", eval, nullptr, [&](bool prediction) {
    status = cmd_eval(eval[prediction ? 1 : 0]);
  });

  TrainArgs train[2];
  auto* c_train = app.add_subcommand("train", "fit a pipeline on the whole corpus");
  add_experiment_commands(*c_train, "train for", nullptr, train, [&](bool prediction) {
    status = cmd_train(train[prediction ? 1 : 0]);
  });

  PredictArgs pred;
  auto* c_predict = app.add_subcommand("predict", "score sessions with a trained pipeline");
  c_predict->add_option("--model", pred.model, "pipeline model file")->required();
  c_predict->add_option("--corpus", pred.corpus, "JSON-lines corpus")->required();
  c_predict->add_option("--images", pred.images,
                        "image-category votes (default: votes in the corpus)");
  c_predict->add_option("--out", pred.out, "predictions CSV")->required();
  c_predict->callback(guarded([&] { return cmd_predict(pred); }));

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "generate a planted-signal corpus with votes");
  c_synth->add_option("--seed", synth.seed, "random seed")->capture_default_str();
  c_synth->add_option("--sessions", synth.spec.sessions, "number of sessions")
      ->capture_default_str();
  c_synth->add_option("--positive-fraction", synth.spec.positive_fraction,
                      "share of bullying sessions")
      ->capture_default_str();
  c_synth->add_option("--bully-token-rate", synth.spec.bully_token_rate,
                      "bully-word share in positive sessions' comments")
      ->capture_default_str();
  c_synth->add_flag("--image-signal", synth.spec.image_signal,
                    "plant the label in the image category");
  c_synth->add_option("--min-comments", synth.spec.min_comments, "fewest comments per session")
      ->capture_default_str();
  c_synth->add_option("--max-comments", synth.spec.max_comments, "most comments per session")
      ->capture_default_str();
  c_synth->add_option("--raters", synth.spec.n_raters, "raters per session")
      ->capture_default_str();
  c_synth->add_option("--flip-rate", synth.spec.flip_rate, "chance a rater votes against truth")
      ->capture_default_str();
  c_synth->add_option("--out-dir", synth.out_dir, "output directory")->capture_default_str();
  c_synth->callback(guarded([&] { return cmd_synth(synth); }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return status;
}
