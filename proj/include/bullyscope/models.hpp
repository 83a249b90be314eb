#ifndef BULLYSCOPE_MODELS_HPP
#define BULLYSCOPE_MODELS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "features.hpp"
#include "numerics/rng.hpp"
#include "numerics/sparse.hpp"

namespace bullyscope {

enum class ModelKind { svm, logistic, maxent, naive_bayes };

inline std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::svm: return "svm";
    case ModelKind::logistic: return "logistic";
    case ModelKind::maxent: return "maxent";
    case ModelKind::naive_bayes: return "naive_bayes";
  }
  return "?";
}

inline ModelKind parse_model_kind(std::string_view s) {
  if (s == "svm") return ModelKind::svm;
  if (s == "logistic") return ModelKind::logistic;
  if (s == "maxent") return ModelKind::maxent;
  if (s == "naive_bayes" || s == "nb") return ModelKind::naive_bayes;
  throw UsageError("unknown classifier '" + std::string(s) +
                   "' (expected svm, logistic, maxent or naive_bayes)");
}

struct TrainConfig {
  double lambda = 1e-4;
  std::size_t epochs = 100;
  std::uint64_t seed = 0;
  std::size_t batch_size = 32;
  // Gradient step for logistic/maxent; 0 selects a diagonally preconditioned
  // step from the data (per-column scale, global 1/L of the rescaled problem).
  double learning_rate = 0.0;
};

struct NaiveBayesParams {
  std::vector<ComponentKind> kinds;
  std::vector<double> log_prior;               // per class
  std::vector<std::vector<double>> mean;       // continuous components
  std::vector<std::vector<double>> variance;   // continuous components
  std::vector<std::vector<double>> log_p;      // binary: log P(x = 1 | c)
  std::vector<std::vector<double>> log_not_p;  // binary: log P(x = 0 | c)
};

/// Trained classifier. svm and logistic keep a single weight vector scoring
/// class 1; maxent keeps one vector per class; naive_bayes keeps its
/// per-class likelihood parameters in `nb`.
struct LinearModel {
  ModelKind kind = ModelKind::svm;
  std::size_t n_classes = 2;
  std::size_t dimension = 0;
  std::vector<std::vector<double>> weights;
  std::vector<double> bias;
  std::string schema_fingerprint;
  TrainConfig config;
  std::optional<NaiveBayesParams> nb;
  std::vector<double> objective_trace;  // end-of-epoch objective, not persisted
};

namespace detail {

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline void check_training_set(std::span<const FeatureVector> x, std::span<const int> y,
                               std::size_t min_classes_present = 2) {
  if (x.empty()) throw DataError("training set is empty");
  if (x.size() != y.size()) throw DataError("feature/label count mismatch");
  const auto& fp = x.front().schema_fingerprint;
  const auto dim = x.front().size();
  for (const auto& v : x) {
    if (v.schema_fingerprint != fp || v.size() != dim) {
      throw DataError("training vectors do not share one schema");
    }
    for (double val : v.values.values) {
      if (!std::isfinite(val)) throw DataError("non-finite feature value");
    }
  }
  std::vector<int> distinct(y.begin(), y.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.front() < 0) throw DataError("negative class label");
  if (distinct.size() < min_classes_present) {
    throw DataError("single-class input: need examples of at least two classes");
  }
}

inline void check_binary(std::span<const int> y) {
  for (int v : y) {
    if (v != 0 && v != 1) throw DataError("binary classifier needs labels in {0, 1}");
  }
}

inline LinearModel empty_model(ModelKind kind, std::span<const FeatureVector> x,
                               std::size_t classes, const TrainConfig& cfg) {
  LinearModel m;
  m.kind = kind;
  m.n_classes = classes;
  m.dimension = x.front().size();
  m.schema_fingerprint = x.front().schema_fingerprint;
  m.config = cfg;
  return m;
}

// Per-parameter steps for one weight block of width d + 1 (bias last).
// Column j is preconditioned by 1 / max_i x_ij^2, which leaves the minimizer
// unchanged; the global step is 1/L of the rescaled problem, where
// loss_curvature bounds the Hessian of the loss in a single score.
inline std::vector<double> block_steps(std::span<const FeatureVector> x, double loss_curvature,
                                       double lambda) {
  const std::size_t d = x.front().size();
  std::vector<double> col_sq(d + 1, 0.0);
  col_sq[d] = 1.0;
  for (const auto& v : x) {
    for (std::size_t k = 0; k < v.values.nnz(); ++k) {
      const double value = v.values.values[k];
      col_sq[v.values.indices[k]] = std::max(col_sq[v.values.indices[k]], value * value);
    }
  }
  std::vector<double> precond(d + 1);
  double max_precond = 0.0;
  for (std::size_t j = 0; j <= d; ++j) {
    precond[j] = col_sq[j] > 0.0 ? 1.0 / col_sq[j] : 1.0;
    max_precond = std::max(max_precond, precond[j]);
  }
  double max_scaled_norm = 0.0;
  for (const auto& v : x) {
    double norm = 1.0;
    for (std::size_t k = 0; k < v.values.nnz(); ++k) {
      const double value = v.values.values[k];
      norm += precond[v.values.indices[k]] * value * value;
    }
    max_scaled_norm = std::max(max_scaled_norm, norm);
  }
  const double step = 1.0 / (loss_curvature * max_scaled_norm + lambda * max_precond);
  for (double& p : precond) p *= step;
  return precond;
}

inline std::vector<double> uniform_steps(std::size_t n, const TrainConfig& cfg) {
  return std::vector<double>(n, cfg.learning_rate);
}

}  // namespace detail

// ---- objectives ------------------------------------------------------------
//
// Parameters are packed as [w_0 .. w_{d-1}, b] for binary models and
// class-major [W_c (d), b_c] blocks for maxent. The bias is not regularized.

/// Mean logistic loss over `rows` (all examples when empty) plus
/// lambda/2 |w|^2. Writes the gradient when `grad` is non-null.
inline double logistic_objective(std::span<const double> params,
                                 std::span<const FeatureVector> x, std::span<const int> y,
                                 double lambda, std::vector<double>* grad = nullptr,
                                 std::span<const std::size_t> rows = {}) {
  const std::size_t d = params.size() - 1;
  const double b = params[d];
  std::span<const double> w = params.first(d);
  const std::size_t n = rows.empty() ? x.size() : rows.size();
  if (grad != nullptr) grad->assign(d + 1, 0.0);
  double loss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = rows.empty() ? r : rows[r];
    const double z = dot(x[i].values, w) + b;
    // log(1 + e^z) - y z, computed stably.
    loss += (z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z))) -
            (y[i] == 1 ? z : 0.0);
    if (grad != nullptr) {
      const double g = detail::sigmoid(z) - (y[i] == 1 ? 1.0 : 0.0);
      axpy(g / static_cast<double>(n), x[i].values, std::span<double>(*grad).first(d));
      (*grad)[d] += g / static_cast<double>(n);
    }
  }
  double reg = 0.0;
  for (std::size_t j = 0; j < d; ++j) reg += w[j] * w[j];
  if (grad != nullptr) {
    for (std::size_t j = 0; j < d; ++j) (*grad)[j] += lambda * w[j];
  }
  return loss / static_cast<double>(n) + 0.5 * lambda * reg;
}

/// Mean multinomial negative log-likelihood plus lambda/2 sum_c |W_c|^2.
inline double maxent_objective(std::span<const double> params, std::size_t classes,
                               std::span<const FeatureVector> x, std::span<const int> y,
                               double lambda, std::vector<double>* grad = nullptr,
                               std::span<const std::size_t> rows = {}) {
  const std::size_t stride = params.size() / classes;
  const std::size_t d = stride - 1;
  const std::size_t n = rows.empty() ? x.size() : rows.size();
  if (grad != nullptr) grad->assign(params.size(), 0.0);
  std::vector<double> logits(classes);
  double loss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = rows.empty() ? r : rows[r];
    for (std::size_t c = 0; c < classes; ++c) {
      auto block = params.subspan(c * stride, stride);
      logits[c] = dot(x[i].values, block.first(d)) + block[d];
    }
    const double mx = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double l : logits) z += std::exp(l - mx);
    const double log_z = mx + std::log(z);
    loss += log_z - logits[static_cast<std::size_t>(y[i])];
    if (grad != nullptr) {
      for (std::size_t c = 0; c < classes; ++c) {
        const double p = std::exp(logits[c] - log_z);
        const double g = (p - (static_cast<std::size_t>(y[i]) == c ? 1.0 : 0.0)) /
                         static_cast<double>(n);
        auto gblock = std::span<double>(*grad).subspan(c * stride, stride);
        axpy(g, x[i].values, gblock.first(d));
        gblock[d] += g;
      }
    }
  }
  double reg = 0.0;
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t j = 0; j < d; ++j) {
      const double w = params[c * stride + j];
      reg += w * w;
      if (grad != nullptr) (*grad)[c * stride + j] += lambda * w;
    }
  }
  return loss / static_cast<double>(n) + 0.5 * lambda * reg;
}

/// lambda/2 |w|^2 + mean hinge loss; the bias is not regularized.
inline double svm_objective(std::span<const double> w, double b,
                            std::span<const FeatureVector> x, std::span<const int> y,
                            double lambda) {
  double hinge = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = y[i] == 1 ? 1.0 : -1.0;
    hinge += std::max(0.0, 1.0 - s * (dot(x[i].values, w) + b));
  }
  double reg = 0.0;
  for (double v : w) reg += v * v;
  return 0.5 * lambda * reg + hinge / static_cast<double>(x.size());
}

// ---- training ----------------------------------------------------------------

/// Linear SVM by the Pegasos stochastic subgradient method: step 1/(lambda t)
/// followed by projection of w onto the ball of radius 1/sqrt(lambda). The
/// bias takes the same subgradient steps without shrinkage. The returned model
/// averages the end-of-epoch iterates over the second half of the epochs.
/// Labels are {0, 1}; class 1 is the positive side.
inline LinearModel train_svm(std::span<const FeatureVector> x, std::span<const int> y,
                             const TrainConfig& cfg) {
  detail::check_training_set(x, y);
  detail::check_binary(y);
  if (!(cfg.lambda > 0.0)) throw UsageError("svm: lambda must be positive");
  if (cfg.epochs == 0) throw UsageError("svm: epochs must be positive");
  LinearModel m = detail::empty_model(ModelKind::svm, x, 2, cfg);
  const std::size_t d = m.dimension;

  // w = scale * v.
  std::vector<double> v(d, 0.0);
  double scale = 1.0;
  double v_sq = 0.0;
  double bias = 0.0;
  const double radius = 1.0 / std::sqrt(cfg.lambda);
  std::vector<double> sq_norm(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sq_norm[i] = x[i].values.squared_norm();

  Rng rng(cfg.seed, "svm");
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t t = 0;
  const std::size_t first_averaged = cfg.epochs / 2;
  std::vector<double> w_sum(d, 0.0);
  double bias_sum = 0.0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (cfg.lambda * static_cast<double>(t));
      const double s = y[i] == 1 ? 1.0 : -1.0;
      const double v_dot_x = dot(x[i].values, v);
      const double margin = scale * v_dot_x + bias;
      const double decay = 1.0 - eta * cfg.lambda;
      if (decay <= 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        scale = 1.0;
        v_sq = 0.0;
      } else {
        scale *= decay;
      }
      if (s * margin < 1.0) {
        const double c = eta * s / scale;
        const double dot_now = decay <= 0.0 ? 0.0 : v_dot_x;
        v_sq += 2.0 * c * dot_now + c * c * sq_norm[i];
        axpy(c, x[i].values, v);
        bias += eta * s;
      }
      const double w_norm = scale * std::sqrt(std::max(v_sq, 0.0));
      if (w_norm > radius) scale *= radius / w_norm;
      if (scale < 1e-150) {
        for (double& e : v) e *= scale;
        scale = 1.0;
        v_sq = 0.0;
        for (double e : v) v_sq += e * e;
      }
    }
    // Resynchronize the running norm to cancel drift.
    v_sq = 0.0;
    for (double e : v) v_sq += e * e;
    std::vector<double> w(d);
    for (std::size_t j = 0; j < d; ++j) w[j] = scale * v[j];
    m.objective_trace.push_back(svm_objective(w, bias, x, y, cfg.lambda));
    if (epoch >= first_averaged) {
      for (std::size_t j = 0; j < d; ++j) w_sum[j] += w[j];
      bias_sum += bias;
    }
  }
  const auto averaged = static_cast<double>(cfg.epochs - first_averaged);
  m.weights.assign(1, std::vector<double>(d));
  for (std::size_t j = 0; j < d; ++j) m.weights[0][j] = w_sum[j] / averaged;
  m.bias = {bias_sum / averaged};
  return m;
}

namespace detail {

// Seeded mini-batch gradient descent over a packed parameter vector.
template <typename Objective>
std::vector<double> minibatch_descent(std::size_t n_params, std::size_t n_examples,
                                      std::span<const double> steps, const TrainConfig& cfg,
                                      std::string_view stream, Objective&& objective,
                                      std::vector<double>& trace) {
  std::vector<double> params(n_params, 0.0);
  std::vector<double> grad;
  Rng rng(cfg.seed, stream);
  std::vector<std::size_t> order(n_examples);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = std::max<std::size_t>(1, cfg.batch_size);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < n_examples; start += batch) {
      const std::size_t len = std::min(batch, n_examples - start);
      objective(params, &grad, std::span<const std::size_t>(order).subspan(start, len));
      for (std::size_t p = 0; p < n_params; ++p) params[p] -= steps[p] * grad[p];
    }
    trace.push_back(objective(params, nullptr, std::span<const std::size_t>{}));
  }
  return params;
}

}  // namespace detail

/// L2-regularized binary logistic regression by mini-batch gradient descent.
inline LinearModel train_logistic(std::span<const FeatureVector> x, std::span<const int> y,
                                  const TrainConfig& cfg) {
  detail::check_training_set(x, y);
  detail::check_binary(y);
  LinearModel m = detail::empty_model(ModelKind::logistic, x, 2, cfg);
  const std::size_t d = m.dimension;
  const auto steps = cfg.learning_rate > 0.0 ? detail::uniform_steps(d + 1, cfg)
                                             : detail::block_steps(x, 0.25, cfg.lambda);
  auto params = detail::minibatch_descent(
      d + 1, x.size(), steps, cfg, "logistic",
      [&](std::span<const double> p, std::vector<double>* g,
          std::span<const std::size_t> rows) {
        return logistic_objective(p, x, y, cfg.lambda, g, rows);
      },
      m.objective_trace);
  m.weights.assign(1, std::vector<double>(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(d)));
  m.bias = {params[d]};
  return m;
}

/// Multinomial logistic regression (maximum entropy) over classes 0..C-1.
inline LinearModel train_maxent(std::span<const FeatureVector> x, std::span<const int> y,
                                const TrainConfig& cfg) {
  detail::check_training_set(x, y);
  const std::size_t classes = static_cast<std::size_t>(*std::max_element(y.begin(), y.end())) + 1;
  LinearModel m = detail::empty_model(ModelKind::maxent, x, classes, cfg);
  const std::size_t d = m.dimension;
  const std::size_t stride = d + 1;
  std::vector<double> steps;
  if (cfg.learning_rate > 0.0) {
    steps = detail::uniform_steps(classes * stride, cfg);
  } else {
    const auto block = detail::block_steps(x, 0.5, cfg.lambda);
    for (std::size_t c = 0; c < classes; ++c) steps.insert(steps.end(), block.begin(), block.end());
  }
  auto params = detail::minibatch_descent(
      classes * stride, x.size(), steps, cfg, "maxent",
      [&](std::span<const double> p, std::vector<double>* g,
          std::span<const std::size_t> rows) {
        return maxent_objective(p, classes, x, y, cfg.lambda, g, rows);
      },
      m.objective_trace);
  for (std::size_t c = 0; c < classes; ++c) {
    auto first = params.begin() + static_cast<std::ptrdiff_t>(c * stride);
    m.weights.emplace_back(first, first + static_cast<std::ptrdiff_t>(d));
    m.bias.push_back(params[c * stride + d]);
  }
  return m;
}

/// Naive Bayes with Gaussian likelihoods for continuous components
/// (variance floored at 1e-9) and Laplace-smoothed Bernoulli likelihoods for
/// binary ones (a value > 0.5 counts as 1). Priors are training frequencies.
inline LinearModel train_naive_bayes(std::span<const FeatureVector> x, std::span<const int> y,
                                     std::span<const ComponentKind> kinds,
                                     const TrainConfig& cfg = {}) {
  detail::check_training_set(x, y);
  const std::size_t classes = static_cast<std::size_t>(*std::max_element(y.begin(), y.end())) + 1;
  LinearModel m = detail::empty_model(ModelKind::naive_bayes, x, classes, cfg);
  const std::size_t d = m.dimension;
  if (kinds.size() != d) {
    throw DataError("naive bayes: component kinds do not match feature dimension");
  }
  constexpr double kVarianceFloor = 1e-9;
  NaiveBayesParams p;
  p.kinds.assign(kinds.begin(), kinds.end());
  std::vector<double> count(classes, 0.0);
  for (int c : y) count[static_cast<std::size_t>(c)] += 1.0;
  p.mean.assign(classes, std::vector<double>(d, 0.0));
  p.variance.assign(classes, std::vector<double>(d, 0.0));
  p.log_p.assign(classes, std::vector<double>(d, 0.0));
  p.log_not_p.assign(classes, std::vector<double>(d, 0.0));
  std::vector<std::vector<double>> ones(classes, std::vector<double>(d, 0.0));
  std::vector<std::vector<double>> nonzero(classes, std::vector<double>(d, 0.0));

  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto c = static_cast<std::size_t>(y[i]);
    const auto& v = x[i].values;
    for (std::size_t k = 0; k < v.nnz(); ++k) {
      p.mean[c][v.indices[k]] += v.values[k];
      if (v.values[k] > 0.5) ones[c][v.indices[k]] += 1.0;
    }
  }
  for (std::size_t c = 0; c < classes; ++c) {
    if (count[c] == 0.0) continue;
    for (double& mu : p.mean[c]) mu /= count[c];
  }
  // Second pass for the squared deviations; implicit zeros are added below.
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto c = static_cast<std::size_t>(y[i]);
    const auto& v = x[i].values;
    for (std::size_t k = 0; k < v.nnz(); ++k) {
      const double dev = v.values[k] - p.mean[c][v.indices[k]];
      p.variance[c][v.indices[k]] += dev * dev;
      nonzero[c][v.indices[k]] += 1.0;
    }
  }
  p.log_prior.resize(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    p.log_prior[c] = count[c] > 0.0
                         ? std::log(count[c] / static_cast<double>(x.size()))
                         : -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < d; ++j) {
      const double n_c = std::max(count[c], 1.0);
      const double zeros = count[c] - nonzero[c][j];
      const double var =
          (p.variance[c][j] + zeros * p.mean[c][j] * p.mean[c][j]) / n_c;
      p.variance[c][j] = std::max(var, kVarianceFloor);
      const double prob = (ones[c][j] + 1.0) / (count[c] + 2.0);
      p.log_p[c][j] = std::log(prob);
      p.log_not_p[c][j] = std::log1p(-prob);
    }
  }
  m.nb = std::move(p);
  return m;
}

// ---- inference -----------------------------------------------------------------

struct Prediction {
  int label = 0;
  double score = 0.0;  // svm: margin; otherwise probability of `label`
};

/// Raw scores without a schema check: margin (svm/logistic), per-class
/// logits (maxent) or per-class log joint likelihoods (naive_bayes).
inline std::vector<double> decision_values(const LinearModel& m, const SparseVector& x) {
  if (x.dimension != m.dimension) {
    throw DataError("feature dimension " + std::to_string(x.dimension) +
                    " != model dimension " + std::to_string(m.dimension));
  }
  if (m.kind != ModelKind::naive_bayes) {
    std::vector<double> out;
    for (std::size_t c = 0; c < m.weights.size(); ++c) {
      out.push_back(dot(x, m.weights[c]) + m.bias[c]);
    }
    return out;
  }
  const auto& p = *m.nb;
  const std::vector<double> dense = x.to_dense();
  std::vector<double> out(m.n_classes);
  for (std::size_t c = 0; c < m.n_classes; ++c) {
    double s = p.log_prior[c];
    for (std::size_t j = 0; j < m.dimension; ++j) {
      if (p.kinds[j] == ComponentKind::binary) {
        s += dense[j] > 0.5 ? p.log_p[c][j] : p.log_not_p[c][j];
      } else {
        const double var = p.variance[c][j];
        const double dev = dense[j] - p.mean[c][j];
        s += -0.5 * std::log(2.0 * std::numbers::pi * var) - dev * dev / (2.0 * var);
      }
    }
    out[c] = s;
  }
  return out;
}

inline void check_fingerprint(const LinearModel& m, const FeatureVector& x) {
  if (x.schema_fingerprint != m.schema_fingerprint) {
    throw DataError("schema fingerprint mismatch: model " + m.schema_fingerprint +
                    ", features " + x.schema_fingerprint);
  }
}

inline std::vector<double> decision_function(const LinearModel& m, const FeatureVector& x) {
  check_fingerprint(m, x);
  return decision_values(m, x.values);
}

inline Prediction predict_values(const LinearModel& m, const SparseVector& x) {
  const std::vector<double> z = decision_values(m, x);
  Prediction out;
  switch (m.kind) {
    case ModelKind::svm:
      out.label = z[0] > 0.0 ? 1 : 0;
      out.score = z[0];
      break;
    case ModelKind::logistic: {
      const double p = detail::sigmoid(z[0]);
      out.label = z[0] > 0.0 ? 1 : 0;
      out.score = out.label == 1 ? p : 1.0 - p;
      break;
    }
    case ModelKind::maxent:
    case ModelKind::naive_bayes: {
      const auto best = static_cast<std::size_t>(
          std::max_element(z.begin(), z.end()) - z.begin());
      double total = 0.0;
      for (double v : z) total += std::exp(v - z[best]);
      out.label = static_cast<int>(best);
      out.score = 1.0 / total;
      break;
    }
  }
  return out;
}

inline Prediction predict(const LinearModel& m, const FeatureVector& x) {
  check_fingerprint(m, x);
  return predict_values(m, x.values);
}

/// Probability that `x` belongs to class 1 (binary models other than svm).
inline double positive_probability(const LinearModel& m, const FeatureVector& x) {
  const Prediction p = predict(m, x);
  if (m.kind == ModelKind::svm) throw UsageError("svm has no probability output");
  return p.label == 1 ? p.score : 1.0 - p.score;
}

// ---- persistence ---------------------------------------------------------------

inline constexpr int kModelFormatVersion = 1;

inline nlohmann::ordered_json train_config_to_json(const TrainConfig& c) {
  nlohmann::ordered_json j;
  j["lambda"] = c.lambda;
  j["epochs"] = c.epochs;
  j["seed"] = c.seed;
  j["batch_size"] = c.batch_size;
  j["learning_rate"] = c.learning_rate;
  return j;
}

inline nlohmann::ordered_json model_to_json(const LinearModel& m) {
  nlohmann::ordered_json j;
  j["format"] = "bullyscope.model";
  j["version"] = kModelFormatVersion;
  j["kind"] = to_string(m.kind);
  j["n_classes"] = m.n_classes;
  j["dimension"] = m.dimension;
  j["schema_fingerprint"] = m.schema_fingerprint;
  j["training_config"] = train_config_to_json(m.config);
  j["weights"] = m.weights;
  j["bias"] = m.bias;
  if (m.nb) {
    nlohmann::ordered_json nb;
    std::vector<std::string> kinds;
    for (auto k : m.nb->kinds) kinds.emplace_back(k == ComponentKind::binary ? "binary" : "continuous");
    nb["kinds"] = kinds;
    nb["log_prior"] = m.nb->log_prior;
    nb["mean"] = m.nb->mean;
    nb["variance"] = m.nb->variance;
    nb["log_p"] = m.nb->log_p;
    nb["log_not_p"] = m.nb->log_not_p;
    j["naive_bayes"] = std::move(nb);
  } else {
    j["naive_bayes"] = nullptr;
  }
  return j;
}

inline LinearModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "bullyscope.model") {
      throw DataError("not a model document");
    }
    if (j.at("version").get<int>() != kModelFormatVersion) {
      throw DataError("unsupported model version");
    }
    LinearModel m;
    m.kind = parse_model_kind(j.at("kind").get<std::string>());
    m.n_classes = j.at("n_classes").get<std::size_t>();
    m.dimension = j.at("dimension").get<std::size_t>();
    m.schema_fingerprint = j.at("schema_fingerprint").get<std::string>();
    const auto& tc = j.at("training_config");
    m.config.lambda = tc.at("lambda").get<double>();
    m.config.epochs = tc.at("epochs").get<std::size_t>();
    m.config.seed = tc.at("seed").get<std::uint64_t>();
    m.config.batch_size = tc.at("batch_size").get<std::size_t>();
    m.config.learning_rate = tc.at("learning_rate").get<double>();
    m.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    m.bias = j.at("bias").get<std::vector<double>>();
    if (!j.at("naive_bayes").is_null()) {
      const auto& nb = j.at("naive_bayes");
      NaiveBayesParams p;
      for (const auto& k : nb.at("kinds").get<std::vector<std::string>>()) {
        p.kinds.push_back(k == "binary" ? ComponentKind::binary : ComponentKind::continuous);
      }
      p.log_prior = nb.at("log_prior").get<std::vector<double>>();
      p.mean = nb.at("mean").get<std::vector<std::vector<double>>>();
      p.variance = nb.at("variance").get<std::vector<std::vector<double>>>();
      p.log_p = nb.at("log_p").get<std::vector<std::vector<double>>>();
      p.log_not_p = nb.at("log_not_p").get<std::vector<std::vector<double>>>();
      m.nb = std::move(p);
    }
    if (m.kind == ModelKind::naive_bayes ? !m.nb : m.weights.size() != m.bias.size()) {
      throw DataError("model parameters are inconsistent with its kind");
    }
    for (const auto& w : m.weights) {
      if (w.size() != m.dimension) throw DataError("model weight length mismatch");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model document: ") + e.what());
  }
}

}  // namespace bullyscope

#endif  // BULLYSCOPE_MODELS_HPP
