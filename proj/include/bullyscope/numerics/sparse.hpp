#ifndef BULLYSCOPE_NUMERICS_SPARSE_HPP
#define BULLYSCOPE_NUMERICS_SPARSE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "../error.hpp"

namespace bullyscope {

/// Sorted (index, value) pairs over a fixed dimension.
struct SparseVector {
  std::size_t dimension = 0;
  std::vector<std::uint32_t> indices;  // strictly increasing, < dimension
  std::vector<double> values;

  std::size_t nnz() const { return indices.size(); }

  static SparseVector from_dense(std::span<const double> dense) {
    SparseVector v;
    v.dimension = dense.size();
    for (std::size_t i = 0; i < dense.size(); ++i) {
      if (dense[i] != 0.0) {
        v.indices.push_back(static_cast<std::uint32_t>(i));
        v.values.push_back(dense[i]);
      }
    }
    return v;
  }

  std::vector<double> to_dense() const {
    std::vector<double> d(dimension, 0.0);
    for (std::size_t k = 0; k < indices.size(); ++k) d[indices[k]] = values[k];
    return d;
  }

  double at(std::size_t i) const {
    for (std::size_t k = 0; k < indices.size(); ++k) {
      if (indices[k] == i) return values[k];
      if (indices[k] > i) break;
    }
    return 0.0;
  }

  double squared_norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s;
  }

  /// Appends `other` shifted past this vector's dimension.
  void append(const SparseVector& other) {
    for (std::size_t k = 0; k < other.indices.size(); ++k) {
      indices.push_back(static_cast<std::uint32_t>(dimension + other.indices[k]));
      values.push_back(other.values[k]);
    }
    dimension += other.dimension;
  }

  void append_dense(std::span<const double> dense) {
    append(from_dense(dense));
  }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

inline double dot(const SparseVector& x, std::span<const double> dense) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.indices.size(); ++k) {
    s += x.values[k] * dense[x.indices[k]];
  }
  return s;
}

/// y += a * x
inline void axpy(double a, const SparseVector& x, std::span<double> y) {
  for (std::size_t k = 0; k < x.indices.size(); ++k) {
    y[x.indices[k]] += a * x.values[k];
  }
}

/// Row-sparse matrix used as a linear operator (document-term matrices).
class SparseRowMatrix {
 public:
  SparseRowMatrix(std::vector<SparseVector> rows, std::size_t cols)
      : rows_(std::move(rows)), cols_(cols) {
    for (const auto& r : rows_) {
      if (r.dimension != cols_) throw NumericError("sparse matrix: ragged rows");
    }
  }

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  const SparseVector& row(std::size_t i) const { return rows_[i]; }

  std::vector<double> multiply(const std::vector<double>& x) const {
    std::vector<double> y(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) y[i] = dot(rows_[i], x);
    return y;
  }

  std::vector<double> multiply_transposed(const std::vector<double>& x) const {
    std::vector<double> y(cols_, 0.0);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (x[i] != 0.0) axpy(x[i], rows_[i], y);
    }
    return y;
  }

 private:
  std::vector<SparseVector> rows_;
  std::size_t cols_;
};

}  // namespace bullyscope

#endif  // BULLYSCOPE_NUMERICS_SPARSE_HPP
