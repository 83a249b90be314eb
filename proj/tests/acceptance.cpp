#include <Eigen/Dense>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include <bullyscope.hpp>

using namespace bullyscope;
namespace fs = std::filesystem;

#ifndef BULLYSCOPE_CLI
#error "BULLYSCOPE_CLI must name the command-line binary"
#endif

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

FeatureVector fv(std::vector<double> dense) {
  return FeatureVector{SparseVector::from_dense(dense), "acceptance"};
}

// ---- 1. Fleiss kappa -------------------------------------------------------------------

Outcome kappa_fixture() {
  Clock clock;
  // Hand oracle for yes-counts [5, 0, 3], 5 raters:
  // P_i = (y(y-1) + (5-y)(4-y)) / 20 = 1, 1, 8/20 -> P_bar = 0.8;
  // p_yes = 8/15, p_no = 7/15 -> P_e = 113/225; kappa = (0.8 - P_e) / (1 - P_e).
  const double pe = 113.0 / 225.0;
  const double oracle = (0.8 - pe) / (1.0 - pe);
  const std::vector<std::size_t> counts{5, 0, 3};
  const double k = fleiss_kappa(counts, 5);
  const std::vector<std::size_t> perfect{5, 0, 5, 0};
  const double kp = fleiss_kappa(perfect, 5);
  const double t = clock.seconds();
  const bool ok = std::abs(k - oracle) <= 1e-12 && std::abs(k - 0.5982) <= 1e-4 && kp == 1.0 &&
                  t < 1.0;
  return {ok, "kappa=" + fmt(k) + " oracle=" + fmt(oracle) + " perfect=" + fmt(kp) +
                  " time=" + fmt(t) + "s"};
}

// ---- 2. Aggregation -------------------------------------------------------------------

Outcome aggregation_exhaustive() {
  std::size_t checked = 0, mismatches = 0;
  for (unsigned agg = 0; agg < 32; ++agg) {
    for (unsigned bully = 0; bully < 32; ++bully) {
      std::vector<LabelRecord> recs;
      for (unsigned r = 0; r < 5; ++r) {
        recs.push_back({"s", "r" + std::to_string(r), 1.0, ((agg >> r) & 1u) != 0,
                        ((bully >> r) & 1u) != 0});
      }
      const auto l = aggregate_votes(recs);
      auto brute = [](unsigned pattern, std::size_t& yes, bool& positive, double& conf) {
        yes = 0;
        for (unsigned r = 0; r < 5; ++r) yes += (pattern >> r) & 1u;
        positive = yes >= 3;
        conf = static_cast<double>(positive ? yes : 5 - yes) / 5.0;
      };
      std::size_t ya, yb;
      bool pa, pb;
      double ca, cb;
      brute(agg, ya, pa, ca);
      brute(bully, yb, pb, cb);
      const bool same = l.n_raters == 5 && l.aggression_votes == ya && l.bullying_votes == yb &&
                        l.is_aggression == pa && l.is_bullying == pb &&
                        l.aggression_confidence == ca && l.bullying_confidence == cb;
      mismatches += same ? 0 : 1;
      ++checked;
    }
  }
  return {mismatches == 0, std::to_string(checked) + " (aggression, bullying) pattern pairs, " +
                               std::to_string(mismatches) + " mismatches"};
}

// ---- 3. Truncated SVD -------------------------------------------------------------------

Outcome svd_oracle() {
  Clock clock;
  Rng rng(2024, "acceptance/svd");
  const std::size_t rows = 50, cols = 40, rank = 10;
  Eigen::MatrixXd a(rows, rank), b(rank, cols);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
  for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = rng.normal();
  const Eigen::MatrixXd dense = a * b;
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));

  Eigen::JacobiSVD<Eigen::MatrixXd> oracle(dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::MatrixXd oracle_k = oracle.matrixU().leftCols(rank) *
                                   oracle.singularValues().head(rank).asDiagonal() *
                                   oracle.matrixV().leftCols(rank).transpose();
  std::string detail;
  bool ok = true;
  for (auto method : {SvdMethod::exact, SvdMethod::randomized}) {
    SvdOptions opts;
    opts.method = method;
    const auto r = truncated_svd(m, rank, 7, opts);
    Eigen::MatrixXd rec = Eigen::MatrixXd::Zero(rows, cols);
    for (std::size_t t = 0; t < rank; ++t) {
      const Eigen::Map<const Eigen::VectorXd> u(r.left_vectors[t].data(), rows);
      const Eigen::Map<const Eigen::VectorXd> v(r.right_vectors[t].data(), cols);
      rec += r.singular_values[t] * u * v.transpose();
    }
    const double err = (rec - oracle_k).norm() / oracle_k.norm();
    bool monotone = true;
    for (std::size_t t = 1; t < rank; ++t) monotone &= r.singular_values[t] <= r.singular_values[t - 1];
    double ortho = 0.0;
    for (std::size_t p = 0; p < rank; ++p)
      for (std::size_t q = 0; q < rank; ++q)
        ortho = std::max(ortho, std::abs(dot(r.right_vectors[p], r.right_vectors[q]) - (p == q ? 1.0 : 0.0)));
    double sv = 0.0;
    for (std::size_t t = 0; t < rank; ++t)
      sv = std::max(sv, std::abs(r.singular_values[t] - oracle.singularValues()(static_cast<Eigen::Index>(t))));
    ok &= err <= 1e-6 && monotone && ortho <= 1e-8;
    detail += std::string(method == SvdMethod::exact ? "exact" : "randomized") + ": err=" +
              fmt(err) + " ortho=" + fmt(ortho) + " max|dsigma|=" + fmt(sv) +
              (monotone ? " non-increasing; " : " NOT monotone; ");
  }
  const double t = clock.seconds();
  ok &= t < 5.0;
  return {ok, detail + "time=" + fmt(t) + "s"};
}

// ---- 4. Gradient checks ----------------------------------------------------------------

template <typename F>
double gradient_error(F objective, std::vector<double> p, const std::vector<double>& analytic) {
  const double h = 1e-6;
  double diff = 0, na = 0, nn = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double orig = p[i];
    p[i] = orig + h;
    const double up = objective(p);
    p[i] = orig - h;
    const double down = objective(p);
    p[i] = orig;
    const double numeric = (up - down) / (2 * h);
    diff += (numeric - analytic[i]) * (numeric - analytic[i]);
    na += analytic[i] * analytic[i];
    nn += numeric * numeric;
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nn), 1e-12});
}

Outcome gradient_checks() {
  double worst_lr = 0, worst_me = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed, "acceptance/gradient");
    const std::size_t n = 5 + rng.below(26), d = 2 + rng.below(9), classes = 3;
    std::vector<FeatureVector> x;
    std::vector<int> y2, y3;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> v(d);
      for (double& e : v) e = rng.uniform() < 0.3 ? 0.0 : rng.normal();
      x.push_back(fv(v));
      y2.push_back(static_cast<int>(rng.below(2)));
      y3.push_back(static_cast<int>(rng.below(classes)));
    }
    const double lambda = 0.01 + rng.uniform();
    std::vector<double> p(d + 1), q(classes * (d + 1)), g;
    for (double& e : p) e = rng.normal();
    for (double& e : q) e = rng.normal();
    logistic_objective(p, x, y2, lambda, &g);
    worst_lr = std::max(worst_lr, gradient_error(
        [&](const std::vector<double>& w) { return logistic_objective(w, x, y2, lambda); }, p, g));
    maxent_objective(q, classes, x, y3, lambda, &g);
    worst_me = std::max(worst_me, gradient_error(
        [&](const std::vector<double>& w) { return maxent_objective(w, classes, x, y3, lambda); }, q, g));
  }
  return {worst_lr <= 1e-5 && worst_me <= 1e-5,
          "20 problems; worst relative error logistic=" + fmt(worst_lr) + " maxent=" + fmt(worst_me)};
}

// ---- 5. SVM sanity ----------------------------------------------------------------------

Outcome svm_sanity() {
  Rng rng(5, "acceptance/svm");
  std::vector<FeatureVector> x;
  std::vector<int> y;
  // Unit normal (0.6, 0.8), offset 0.3; points within 0.5 of the plane are rejected.
  while (x.size() < 200) {
    const double a = 4 * rng.uniform() - 2, b = 4 * rng.uniform() - 2;
    const double s = 0.6 * a + 0.8 * b + 0.3;
    if (std::abs(s) < 0.5) continue;
    x.push_back(fv({a, b}));
    y.push_back(s > 0 ? 1 : 0);
  }
  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.seed = 11;
  const auto m = train_svm(x, y, cfg);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < x.size(); ++i) correct += predict(m, x[i]).label == y[i] ? 1 : 0;
  const auto again = train_svm(x, y, cfg);
  const bool deterministic = again.weights == m.weights && again.bias == m.bias;
  const double acc = static_cast<double>(correct) / static_cast<double>(x.size());
  return {acc == 1.0 && deterministic,
          "training accuracy=" + fmt(acc) + " after 50 epochs (lambda=" + fmt(cfg.lambda) + ")" +
              (deterministic ? ", identical rerun" : ", rerun DIFFERS")};
}

// ---- 6. End-to-end detection ------------------------------------------------------------

Outcome detection_end_to_end() {
  Clock clock;
  SyntheticSpec spec;
  spec.sessions = 1000;
  spec.positive_fraction = 0.3;
  const auto synth = generate_synthetic_corpus(spec, 1);
  const auto labels = aggregate_all(synth.labels).labels;
  ExperimentConfig cfg;
  apply_setting(cfg, "ngrams", "1");
  cfg.classifier = ModelKind::svm;
  const auto real = run_detection_experiment(synth.corpus, labels, cfg);
  // One permutation is a single draw from the null, so average several.
  constexpr int kPermutations = 10;
  double f1c = 0.0;
  double f1c_min = 1.0, f1c_max = 0.0;
  for (int p = 0; p < kPermutations; ++p) {
    const auto shuffled = permute_labels(labels, 99 + static_cast<std::uint64_t>(p));
    const double f = run_detection_experiment(synth.corpus, shuffled, cfg).rows[0].mean.f1;
    f1c += f / kPermutations;
    f1c_min = std::min(f1c_min, f);
    f1c_max = std::max(f1c_max, f);
  }
  std::size_t positives = 0;
  for (const auto& l : labels) positives += l.is_bullying ? 1 : 0;
  // A guesser that says "positive" at the base rate pi has precision pi and recall pi.
  const double base = static_cast<double>(positives) / static_cast<double>(labels.size());
  const double f1 = real.rows[0].mean.f1;
  const double t = clock.seconds();
  return {f1 >= 0.9 && std::abs(f1c - base) <= 0.1 && t < 60.0,
          "mean F1=" + fmt(f1) + " (P=" + fmt(real.rows[0].mean.precision) +
              " R=" + fmt(real.rows[0].mean.recall) + "); shuffled F1 mean over " +
              std::to_string(kPermutations) + " permutations=" + fmt(f1c) + " [" + fmt(f1c_min) +
              ", " + fmt(f1c_max) + "]" +
              " vs random-guess F1=" + fmt(base) + "; time=" + fmt(t) + "s"};
}

// ---- 7. Prediction ladder ---------------------------------------------------------------

double final_f1(const EvalReport& r) { return r.rows.back().mean.f1; }

Outcome prediction_ladder() {
  Clock clock;
  SyntheticSpec comments_only;
  comments_only.sessions = 1000;
  const auto a = generate_synthetic_corpus(comments_only, 2);
  const auto la = aggregate_all(a.labels).labels;
  const auto ia = resolve_image_votes(a.image_votes);
  auto cfg = default_prediction_config();
  cfg.k_comments = 0;
  const double k0 = final_f1(run_prediction_experiment(a.corpus, la, ia, cfg));
  cfg.k_comments = 15;
  const double k15 = final_f1(run_prediction_experiment(a.corpus, la, ia, cfg));

  SyntheticSpec image_only;
  image_only.sessions = 1000;
  image_only.bully_token_rate = 0.0;
  image_only.image_signal = true;
  const auto b = generate_synthetic_corpus(image_only, 3);
  const auto lb = aggregate_all(b.labels).labels;
  cfg.k_comments = 0;
  const auto rb = run_prediction_experiment(b.corpus, lb, resolve_image_votes(b.image_votes), cfg);
  std::string rows;
  for (const auto& row : rb.rows) rows += " " + row.name + "=" + fmt(row.mean.f1);
  return {k15 - k0 >= 0.1 && final_f1(rb) >= 0.9,
          "comment signal: F1(k=15)=" + fmt(k15) + " F1(k=0)=" + fmt(k0) +
              "; image signal at k=0:" + rows + "; time=" + fmt(clock.seconds()) + "s"};
}

// ---- 8. Leakage audit ---------------------------------------------------------------------

Outcome leakage_audit() {
  SyntheticSpec spec;
  spec.sessions = 200;
  auto synth = generate_synthetic_corpus(spec, 4);
  // Give every session a term of its own so held-out-only terms certainly exist.
  for (auto& s : synth.corpus.sessions) s.comments.back().text += " only" + s.session_id;
  const auto labels = aggregate_all(synth.labels).labels;
  std::size_t audited_test_only = 0, problems = 0, folds = 0;
  const Lexicon stop = resources::default_stopwords();
  for (std::size_t min_df : {1, 2}) {
    ExperimentConfig cfg;
    cfg.features.text.min_df = min_df;
    const auto report = run_detection_experiment(synth.corpus, labels, cfg);
    const auto data = join_labels(synth.corpus, labels, cfg.target);
    const auto plan = stratified_kfold(data.ids, data.y, cfg.folds, cfg.seed);
    for (std::size_t f = 0; f < plan.k; ++f) {
      ++folds;
      const auto train = plan.train_indices(f), test = plan.test_indices(f);
      const std::uint64_t fold_seed = Rng(cfg.seed, "fold/" + std::to_string(f)).next();
      const auto art = fit_fold(data, train, cfg.features, cfg, nullptr, fold_seed);
      const auto& vocab = art.featurizer.comment_block()->vocabulary;
      if (vocab.fingerprint() != report.rows[0].folds[f].vocabulary_fingerprint) ++problems;

      auto terms_of = [&](std::size_t i) {
        const auto doc = comment_document(*data.sessions[i], kAllComments, false);
        const auto t = document_terms(doc, cfg.features.text.bigrams, &stop);
        return std::set<std::string>(t.begin(), t.end());
      };
      std::map<std::string, std::size_t> train_df;
      for (std::size_t i : train)
        for (const auto& t : terms_of(i)) ++train_df[t];
      std::set<std::string> expected, fitted(vocab.terms.begin(), vocab.terms.end());
      for (const auto& [t, df] : train_df)
        if (df >= min_df) expected.insert(t);
      if (expected != fitted) ++problems;
      for (std::size_t i : test) {
        for (const auto& t : terms_of(i)) {
          if (train_df.count(t)) continue;
          ++audited_test_only;
          if (fitted.count(t)) ++problems;
        }
      }
      const std::set<std::size_t> train_set(train.begin(), train.end());
      for (std::size_t i : art.balanced_train) problems += train_set.count(i) ? 0 : 1;
    }
  }
  return {problems == 0 && audited_test_only > 0,
          std::to_string(folds) + " folds, " + std::to_string(audited_test_only) +
              " test-only term occurrences checked, " + std::to_string(problems) + " violations"};
}

// ---- 9. Statistics kernels -------------------------------------------------------------

Outcome statistics_kernels() {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const double up = pearson(x, std::vector<double>{2, 4, 6, 8, 10});
  const double down = pearson(x, std::vector<double>{10, 8, 6, 4, 2});
  // x = [1,2,3], y = [1,3,3]: sxy = 2, sxx = 2, syy = 8/3 -> r = sqrt(3)/2.
  const double r = pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 3});
  // Means 2 and 3, variances 1 and 1, n = 3: t = -1/sqrt(2/3), df = 4.
  const auto w = welch_t(std::vector<double>{1, 2, 3}, std::vector<double>{2, 3, 4});
  const double t_oracle = -1.0 / std::sqrt(2.0 / 3.0);
  const bool ok = up == 1.0 && down == -1.0 && std::abs(r - std::sqrt(3.0) / 2.0) <= 1e-9 &&
                  std::abs(w.t - t_oracle) <= 1e-9 && std::abs(w.df - 4.0) <= 1e-9;
  return {ok, "r=+" + fmt(up) + "/" + fmt(down) + ", r=" + fmt(r) + ", t=" + fmt(w.t) +
                  ", df=" + fmt(w.df)};
}

// ---- 10. CLI determinism ----------------------------------------------------------------

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(BULLYSCOPE_CLI) + " " + args + " >> " + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = io::read_file(e.path());
  }
  return out;
}

Outcome cli_determinism(const fs::path& work) {
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path log = work / "cli.log";
  const std::string d = work.string();
  int failures = 0;
  failures += run("synth --seed 3 --sessions 150 --image-signal --out-dir " + d + "/s", log) != 0;
  failures += run("labels --votes " + d + "/s/votes.jsonl --out " + d + "/labels.jsonl", log) != 0;
  const std::string data = " --corpus " + d + "/s/corpus.jsonl --labels " + d + "/labels.jsonl";
  const std::string images = " --images " + d + "/s/image_votes.jsonl";
  auto experiments = [&](const std::string& out, int jobs) {
    const std::string j = " --jobs " + std::to_string(jobs) + " --seed 8 --epochs 20";
    failures += run("eval detect" + data + j + " --out-dir " + out, log) != 0;
    failures += run("eval predict" + data + images + j + " --k-comments 5 --out-dir " + out, log) != 0;
    failures += run("train detect" + data + j + " --out " + out + "/detect_model.json", log) != 0;
    failures += run("train predict" + data + images + j + " --out " + out + "/predict_model.json", log) != 0;
    failures += run("predict --model " + out + "/predict_model.json --corpus " + d +
                        "/s/corpus.jsonl" + images + " --out " + out + "/predictions.csv",
                    log) != 0;
    failures += run("analyze" + data + " --profanity " + d + "/s/profanity.txt --plot-data --out-dir " +
                        out + "/analysis",
                    log) != 0;
  };
  experiments(d + "/jobs1", 1);
  experiments(d + "/jobs4", 4);
  experiments(d + "/jobs1_again", 1);
  const auto a = tree_contents(work / "jobs1");
  const auto b = tree_contents(work / "jobs4");
  const auto c = tree_contents(work / "jobs1_again");
  const bool same = !a.empty() && a == b && a == c;
  std::size_t differing = 0;
  for (const auto& [name, content] : a) {
    auto it = b.find(name);
    if (it == b.end() || it->second != content) ++differing;
  }
  return {failures == 0 && same,
          std::to_string(a.size()) + " output files compared across --jobs 1, 4 and a rerun; " +
              std::to_string(differing) + " differ; " + std::to_string(failures) +
              " failed commands (log: " + log.string() + ")"};
}

// ---- 11. Analysis reports ---------------------------------------------------------------

struct FixtureSession {
  std::size_t aggression, bullying, negative, comments, negation, religion;
  const char* image;
};

// Twenty sessions, five raters each. Negative comments carry one profane
// token; negation and religion tokens ride on the first comment.
const std::vector<FixtureSession>& fixture_table() {
  static const std::vector<FixtureSession> t = {
      {5, 5, 9, 10, 2, 1, "drugs"},  {5, 5, 7, 10, 2, 1, "drugs"},
      {5, 4, 5, 10, 2, 0, "drugs"},  {4, 3, 2, 10, 2, 0, "person"},
      {5, 3, 3, 10, 2, 0, "person"}, {3, 2, 2, 10, 1, 0, "drugs"},
      {3, 1, 1, 10, 1, 0, "person"}, {4, 2, 3, 10, 1, 0, "person"},
      {2, 0, 0, 10, 1, 0, "person"}, {1, 0, 0, 10, 1, 0, "person"},
      {0, 0, 0, 10, 1, 0, "person"}, {0, 0, 0, 10, 1, 0, "person"},
      {0, 0, 0, 10, 1, 0, "text"},   {0, 0, 0, 10, 1, 0, "text"},
      {2, 1, 2, 10, 1, 0, "text"},   {1, 1, 1, 5, 1, 0, "text"},
      {0, 0, 0, 10, 1, 0, "text"},   {0, 0, 10, 10, 1, 0, "text"},
      {1, 3, 4, 10, 2, 0, "celebrity"}, {2, 4, 5, 10, 2, 0, "celebrity"},
  };
  return t;
}

Outcome analysis_reports() {
  Corpus corpus;
  std::vector<AggregatedLabel> labels;
  std::map<std::string, ImageLabel> images;
  const auto& table = fixture_table();
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& f = table[i];
    const std::string id = std::string(i < 10 ? "s0" : "s") + std::to_string(i);
    MediaSession s;
    s.session_id = id;
    for (std::size_t c = 0; c < f.comments; ++c) {
      std::string text = c < f.negative ? "you damn" : "nice photo";
      if (c == 0) {
        for (std::size_t k = 0; k < f.negation; ++k) text += " not";
        for (std::size_t k = 0; k < f.religion; ++k) text += " god";
      }
      s.comments.push_back({"u" + std::to_string(c), static_cast<std::int64_t>(100 * c), text, false});
    }
    corpus.sessions.push_back(s);
    std::vector<LabelRecord> recs;
    for (std::size_t r = 0; r < 5; ++r) {
      recs.push_back({id, "r" + std::to_string(r), 1.0, r < f.aggression, r < f.bullying});
    }
    labels.push_back(aggregate_votes(recs));
    images.emplace(id, image_category_majority({{f.image}, {f.image}, {f.image}}, id));
  }
  std::vector<std::string> failures;
  auto expect = [&](const Report& r, const std::string& row, const std::string& col, Cell want) {
    const Cell got = r.at(row, col);
    if (got != want) {
      failures.push_back(r.name + "[" + row + "," + col + "]=" + (got ? fmt(*got) : "null") +
                         " expected " + (want ? fmt(*want) : "null"));
    }
  };

  // Vote distribution, hand counts over 20 sessions.
  const auto dist = vote_distribution(labels);
  const std::vector<double> bully_counts{8, 3, 2, 3, 2, 2};
  const std::vector<double> agg_counts{6, 3, 3, 2, 2, 4};
  for (std::size_t j = 0; j <= 5; ++j) {
    expect(dist, std::to_string(j), "bullying", bully_counts[j] / 20.0);
    expect(dist, std::to_string(j), "aggression", agg_counts[j] / 20.0);
  }

  // Heatmap cells (bullying votes, aggression votes).
  const auto heat = vote_heatmap(labels);
  std::map<std::pair<int, int>, double> cells{
      {{0, 0}, 6}, {{0, 1}, 1}, {{0, 2}, 1}, {{1, 1}, 1}, {{1, 2}, 1}, {{1, 3}, 1}, {{2, 3}, 1},
      {{2, 4}, 1}, {{3, 1}, 1}, {{3, 4}, 1}, {{3, 5}, 1}, {{4, 2}, 1}, {{4, 5}, 1}, {{5, 5}, 2}};
  for (int b = 0; b <= 5; ++b) {
    for (int a = 0; a <= 5; ++a) {
      auto it = cells.find({b, a});
      expect(heat, std::to_string(b), "aggression=" + std::to_string(a),
             it == cells.end() ? 0.0 : it->second);
    }
  }
  const std::vector<std::string> flags{
      "2 sessions below the diagonal",
      "session 's18': bullying votes 3 > aggression votes 1",
      "session 's19': bullying votes 4 > aggression votes 2"};
  if (heat.notes != flags) failures.push_back("vote_heatmap notes differ");

  // Negativity bins; s03 (2/10) and s15 (1/5) sit exactly on 20 %.
  const auto profanity = parse_lexicon("profanity", "damn\n");
  const auto bins = negativity_bins_report(corpus, labels, profanity);
  struct Bin {
    const char* label;
    double sessions;
    Cell agg, bully;
  };
  const std::vector<Bin> bin_table{
      {"[0-10]", 8, 100.0 * 1 / 8, 0.0},   {"(10-20]", 4, 50.0, 25.0},
      {"(20-30]", 2, 100.0, 50.0},         {"(30-40]", 1, 0.0, 100.0},
      {"(40-50]", 2, 50.0, 100.0},         {"(50-60]", 0, std::nullopt, std::nullopt},
      {"(60-70]", 1, 100.0, 100.0},        {"(70-80]", 0, std::nullopt, std::nullopt},
      {"(80-90]", 1, 100.0, 100.0},        {"(90-100]", 1, 0.0, 0.0}};
  for (const auto& b : bin_table) {
    expect(bins, b.label, "sessions", b.sessions);
    expect(bins, b.label, "aggression_pct", b.agg);
    expect(bins, b.label, "bullying_pct", b.bully);
  }

  // LIWC-style ratios, bullying positives = s00-s04, s18, s19.
  const auto cats = parse_category_lexicon("negation: not\nreligion: god\nswear: damn\n");
  const auto liwc = liwc_ratio_report(corpus, labels, cats);
  expect(liwc, "swear", "mean_positive", 35.0 / 7.0);
  expect(liwc, "swear", "mean_negative", 19.0 / 13.0);
  expect(liwc, "swear", "ratio", (35.0 / 7.0) / (19.0 / 13.0));
  expect(liwc, "negation", "mean_positive", 2.0);
  expect(liwc, "negation", "mean_negative", 1.0);
  expect(liwc, "negation", "ratio", 2.0);
  expect(liwc, "negation", "welch_p", std::nullopt);  // two constant classes
  expect(liwc, "religion", "mean_positive", 2.0 / 7.0);
  expect(liwc, "religion", "mean_negative", 0.0);
  expect(liwc, "religion", "ratio", std::nullopt);

  // Image categories.
  const auto img = image_category_report(corpus, labels, images);
  expect(img, "drugs", "fraction_of_sessions", 4.0 / 20.0);
  expect(img, "drugs", "bullying_fraction", 0.75);
  expect(img, "drugs", "aggression_fraction", 1.0);
  expect(img, "person", "fraction_of_sessions", 8.0 / 20.0);
  expect(img, "person", "bullying_fraction", 0.25);
  expect(img, "person", "aggression_fraction", 0.5);
  expect(img, "text", "fraction_of_sessions", 6.0 / 20.0);
  expect(img, "text", "bullying_fraction", 0.0);
  expect(img, "celebrity", "fraction_of_sessions", 2.0 / 20.0);
  expect(img, "celebrity", "bullying_fraction", 1.0);
  expect(img, "celebrity", "aggression_fraction", 0.0);
  for (const char* absent : {"sport", "clothes", "tattoo", "car", "bike", "nature", "food",
                             "cartoon", "unknown"}) {
    expect(img, absent, "fraction_of_sessions", 0.0);
    expect(img, absent, "bullying_fraction", std::nullopt);
  }

  std::string detail = "vote_distribution, vote_heatmap, negativity_bins, liwc_ratio, "
                       "image_categories checked";
  for (const auto& f : failures) detail += "; " + f;
  return {failures.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "bullyscope_acceptance";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Fleiss kappa fixture", kappa_fixture},
      {"aggregation exhaustive oracle", aggregation_exhaustive},
      {"truncated SVD vs dense oracle", svd_oracle},
      {"logistic/maxent gradient checks", gradient_checks},
      {"SVM separable sanity", svm_sanity},
      {"end-to-end detection", detection_end_to_end},
      {"prediction ladder", prediction_ladder},
      {"fold leakage audit", leakage_audit},
      {"statistics kernels", statistics_kernels},
      {"CLI determinism across --jobs", [&] { return cli_determinism(work); }},
      {"analysis reports on 20-session fixture", analysis_reports},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << " ("
              << criteria[i].first << "): " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " acceptance criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
