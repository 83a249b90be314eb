#ifndef BULLYSCOPE_NUMERICS_SVD_HPP
#define BULLYSCOPE_NUMERICS_SVD_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "../error.hpp"
#include "matrix.hpp"
#include "rng.hpp"
#include "sparse.hpp"

namespace bullyscope {

struct SvdResult {
  std::vector<double> singular_values;             // non-increasing, >= 0
  std::vector<std::vector<double>> right_vectors;  // k vectors of length cols
  std::vector<std::vector<double>> left_vectors;   // k vectors of length rows
};

enum class SvdMethod { automatic, exact, randomized };

struct SvdOptions {
  SvdMethod method = SvdMethod::automatic;
  std::size_t power_iterations = 2;
  std::size_t oversample = 8;
  // automatic uses the exact decomposition when min(rows, cols) <= this.
  std::size_t exact_threshold = 64;
};

namespace detail {

using Columns = std::vector<std::vector<double>>;

inline void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

// Appends to `basis` until it has `target` orthonormal vectors of length
// `dim`, drawing candidates from the standard basis.
inline void complete_basis(Columns& basis, std::size_t dim, std::size_t target) {
  for (std::size_t e = 0; e < dim && basis.size() < target; ++e) {
    std::vector<double> v(dim, 0.0);
    v[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) axpy(-dot(b, v), b, v);
    }
    const double n = norm2(v);
    if (n > 0.5) {
      for (double& x : v) x /= n;
      basis.push_back(std::move(v));
    }
  }
}

// Modified Gram-Schmidt with one reorthogonalization pass. Columns that
// collapse numerically are replaced by standard-basis completions so the
// result always has the input's column count.
inline Columns orthonormalize(Columns cols) {
  const std::size_t dim = cols.empty() ? 0 : cols.front().size();
  Columns q;
  q.reserve(cols.size());
  std::size_t missing = 0;
  for (auto& v : cols) {
    const double original = norm2(v);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : q) axpy(-dot(b, v), b, v);
    }
    const double n = norm2(v);
    if (original == 0.0 || n <= 1e-10 * original) {
      ++missing;
      continue;
    }
    for (double& x : v) x /= n;
    q.push_back(std::move(v));
  }
  if (missing > 0) {
    complete_basis(q, dim, q.size() + missing);
  }
  return q;
}

// Flip each (u, v) pair so the largest-magnitude entry of v is positive.
inline void normalize_signs(SvdResult& r) {
  for (std::size_t j = 0; j < r.right_vectors.size(); ++j) {
    auto& v = r.right_vectors[j];
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (std::fabs(v[i]) > std::fabs(v[best])) best = i;
    }
    if (!v.empty() && v[best] < 0.0) {
      for (double& x : v) x = -x;
      for (double& x : r.left_vectors[j]) x = -x;
    }
  }
}

// Full thin SVD by one-sided (Hestenes) Jacobi rotations on the columns of
// a tall matrix given as `cols` (n columns of length m, m >= n). Returns
// all n triplets sorted by singular value.
inline SvdResult jacobi_tall(Columns work) {
  const std::size_t n = work.size();
  const std::size_t m = n == 0 ? 0 : work.front().size();
  Columns v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

  constexpr double kTol = 1e-15;
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        auto& wp = work[p];
        auto& wq = work[q];
        const double alpha = dot(wp, wp);
        const double beta = dot(wq, wq);
        const double gamma = dot(wp, wq);
        if (alpha < 1e-300 || beta < 1e-300) continue;
        if (std::fabs(gamma) <= kTol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double a = wp[i];
          const double b = wq[i];
          wp[i] = c * a - s * b;
          wq[i] = s * a + c * b;
        }
        auto& vp = v[p];
        auto& vq = v[q];
        for (std::size_t i = 0; i < n; ++i) {
          const double a = vp[i];
          const double b = vq[i];
          vp[i] = c * a - s * b;
          vq[i] = s * a + c * b;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(work[j]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sigma[a] > sigma[b];
  });

  const double scale = n == 0 ? 0.0 : sigma[order.front()];
  SvdResult r;
  Columns left;
  for (std::size_t j : order) {
    r.singular_values.push_back(sigma[j]);
    r.right_vectors.push_back(v[j]);
  }
  // Left vectors for numerically-zero singular values are filled in by
  // completing an orthonormal basis.
  std::size_t nonzero = 0;
  for (std::size_t j : order) {
    if (sigma[j] > 1e-13 * std::max(scale, 1e-300)) {
      std::vector<double> u = work[j];
      for (double& x : u) x /= sigma[j];
      left.push_back(std::move(u));
      ++nonzero;
    }
  }
  for (std::size_t j = nonzero; j < n; ++j) r.singular_values[j] = 0.0;
  complete_basis(left, m, n);
  r.left_vectors = std::move(left);
  return r;
}

inline SvdResult exact_svd(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m >= n) {
    Columns cols(n, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) cols[j][i] = a(i, j);
    }
    return jacobi_tall(std::move(cols));
  }
  // Wide: decompose the transpose and swap the roles of U and V.
  Columns rows(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto r = a.row(i);
    rows[i].assign(r.begin(), r.end());
  }
  SvdResult t = jacobi_tall(std::move(rows));
  std::swap(t.left_vectors, t.right_vectors);
  return t;
}

// Dense matrix viewed through the operator interface randomized_svd uses.
struct DenseOperator {
  const Matrix& a;
  std::size_t rows() const { return a.rows(); }
  std::size_t cols() const { return a.cols(); }
  std::vector<double> multiply(const std::vector<double>& x) const {
    std::vector<double> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
    return y;
  }
  std::vector<double> multiply_transposed(const std::vector<double>& x) const {
    std::vector<double> y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (x[i] == 0.0) continue;
      auto r = a.row(i);
      for (std::size_t j = 0; j < a.cols(); ++j) y[j] += x[i] * r[j];
    }
    return y;
  }
};

// `Op` provides rows(), cols(), multiply(x) and multiply_transposed(y).
template <typename Op>
SvdResult randomized_svd(const Op& a, std::size_t k, std::uint64_t seed,
                         const SvdOptions& opts) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t l = std::min(k + opts.oversample, std::min(m, n));
  Rng rng(seed, "truncated_svd");

  Columns omega(l, std::vector<double>(n));
  for (auto& col : omega) {
    for (double& x : col) x = rng.normal();
  }
  Columns q(l);
  for (std::size_t j = 0; j < l; ++j) q[j] = a.multiply(omega[j]);
  q = orthonormalize(std::move(q));
  for (std::size_t it = 0; it < opts.power_iterations; ++it) {
    Columns z(l);
    for (std::size_t j = 0; j < l; ++j) z[j] = a.multiply_transposed(q[j]);
    z = orthonormalize(std::move(z));
    for (std::size_t j = 0; j < l; ++j) q[j] = a.multiply(z[j]);
    q = orthonormalize(std::move(q));
  }

  // B = Q^T A is l x n; its rows are A^T q_j.
  Columns b_rows(l);
  for (std::size_t j = 0; j < l; ++j) b_rows[j] = a.multiply_transposed(q[j]);
  // B^T is tall (n x l); Jacobi on its columns gives B^T = V S Ub^T.
  SvdResult small = jacobi_tall(std::move(b_rows));
  SvdResult r;
  r.singular_values = std::move(small.singular_values);
  r.right_vectors = std::move(small.left_vectors);
  for (const auto& ub : small.right_vectors) {
    std::vector<double> u(m, 0.0);
    for (std::size_t j = 0; j < l; ++j) axpy(ub[j], q[j], u);
    r.left_vectors.push_back(std::move(u));
  }
  return r;
}

inline void check_rank(std::size_t k, std::size_t rows, std::size_t cols) {
  const std::size_t min_dim = std::min(rows, cols);
  if (k < 1 || k > min_dim) {
    throw NumericError("truncated_svd: k=" + std::to_string(k) +
                       " outside [1, " + std::to_string(min_dim) + "]");
  }
}

inline bool use_exact(const SvdOptions& opts, std::size_t rows, std::size_t cols) {
  return opts.method == SvdMethod::exact ||
         (opts.method == SvdMethod::automatic &&
          std::min(rows, cols) <= opts.exact_threshold);
}

inline SvdResult finish(SvdResult r, std::size_t k) {
  r.singular_values.resize(k);
  r.right_vectors.resize(k);
  r.left_vectors.resize(k);
  normalize_signs(r);
  return r;
}

}  // namespace detail

/// Top-k singular triplets of `m`.
///
/// Small problems (min dimension <= exact_threshold) use a full one-sided
/// Jacobi decomposition; larger ones use seeded randomized subspace
/// iteration followed by an exact decomposition of the projected matrix.
/// Signs are fixed so the largest-magnitude entry of each right vector is
/// positive, which makes the output a pure function of (m, k, seed, opts).
inline SvdResult truncated_svd(const Matrix& m, std::size_t k, std::uint64_t seed,
                               const SvdOptions& opts = {}) {
  detail::check_rank(k, m.rows(), m.cols());
  if (detail::use_exact(opts, m.rows(), m.cols())) {
    return detail::finish(detail::exact_svd(m), k);
  }
  return detail::finish(detail::randomized_svd(detail::DenseOperator{m}, k, seed, opts), k);
}

/// Sparse overload; the exact path densifies, which is only taken when the
/// smaller dimension is at most exact_threshold.
inline SvdResult truncated_svd(const SparseRowMatrix& m, std::size_t k,
                               std::uint64_t seed, const SvdOptions& opts = {}) {
  detail::check_rank(k, m.rows(), m.cols());
  if (detail::use_exact(opts, m.rows(), m.cols())) {
    Matrix dense(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const auto& r = m.row(i);
      for (std::size_t t = 0; t < r.nnz(); ++t) dense(i, r.indices[t]) = r.values[t];
    }
    return detail::finish(detail::exact_svd(dense), k);
  }
  return detail::finish(detail::randomized_svd(m, k, seed, opts), k);
}

}  // namespace bullyscope

#endif  // BULLYSCOPE_NUMERICS_SVD_HPP
