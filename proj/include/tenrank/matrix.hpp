#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tenrank/errors.hpp"
#include "tenrank/scalar.hpp"

namespace tenrank {

/// Dense row-major matrix over a field T.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) throw InputError("matrix data length does not match shape");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::vector<T> column(std::size_t c) const {
    std::vector<T> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out.push_back((*this)(r, c));
    return out;
  }

  const std::vector<T>& data() const { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <typename T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw InputError("matrix product shape mismatch");
  Matrix<T> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (is_zero(a(i, k))) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

template <typename T>
Matrix<T> operator+(Matrix<T> a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InputError("matrix sum shape mismatch");
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) += b(i, j);
  return a;
}

template <typename T>
std::vector<T> operator*(const Matrix<T>& a, std::span<const T> x) {
  if (a.cols() != x.size()) throw InputError("matrix-vector shape mismatch");
  std::vector<T> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (!is_zero(x[k])) y[i] += a(i, k) * x[k];
  return y;
}

/// Result of exact Gauss-Jordan elimination.
template <typename T>
struct RowEchelon {
  Matrix<T> reduced;                  ///< reduced row echelon form, zero rows at the bottom
  std::vector<std::size_t> pivots;    ///< pivot column of each nonzero row
  T determinant_factor = T(1);        ///< product of pivots and row-swap signs (square inputs)

  std::size_t rank() const { return pivots.size(); }
};

/// Exact Gauss-Jordan elimination; pivot = first nonzero entry in the column.
template <typename T>
RowEchelon<T> row_reduce(Matrix<T> m) {
  RowEchelon<T> out;
  std::size_t lead_row = 0;
  for (std::size_t c = 0; c < m.cols() && lead_row < m.rows(); ++c) {
    std::size_t p = lead_row;
    while (p < m.rows() && is_zero(m(p, c))) ++p;
    if (p == m.rows()) continue;
    if (p != lead_row) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(lead_row, j));
      out.determinant_factor = -out.determinant_factor;
    }
    T pivot = m(lead_row, c);
    out.determinant_factor *= pivot;
    T inv = T(1) / pivot;
    for (std::size_t j = c; j < m.cols(); ++j)
      if (!is_zero(m(lead_row, j))) m(lead_row, j) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == lead_row || is_zero(m(r, c))) continue;
      T f = m(r, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!is_zero(m(lead_row, j))) m(r, j) -= f * m(lead_row, j);
    }
    out.pivots.push_back(c);
    ++lead_row;
  }
  out.reduced = std::move(m);
  return out;
}

template <typename T>
std::size_t matrix_rank(const Matrix<T>& m) {
  // Reduce along the shorter side; rank is transpose invariant.
  if (m.cols() < m.rows()) return row_reduce(m.transpose()).rank();
  return row_reduce(m).rank();
}

template <typename T>
T determinant(const Matrix<T>& m) {
  if (m.rows() != m.cols()) throw InputError("determinant of non-square matrix");
  auto re = row_reduce(m);
  if (re.rank() < m.rows()) return T(0);
  return re.determinant_factor;
}

/// Exact inverse; std::nullopt when singular.
template <typename T>
std::optional<Matrix<T>> inverse(const Matrix<T>& m) {
  if (m.rows() != m.cols()) throw InputError("inverse of non-square matrix");
  const std::size_t n = m.rows();
  Matrix<T> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = T(1);
  }
  auto re = row_reduce(std::move(aug));
  if (re.rank() < n || re.pivots[n - 1] != n - 1) return std::nullopt;
  Matrix<T> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = re.reduced(i, n + j);
  return inv;
}

/// Basis of the row space (nonzero rows of the reduced echelon form).
template <typename T>
std::vector<std::vector<T>> row_space_basis(const Matrix<T>& m) {
  auto re = row_reduce(m);
  std::vector<std::vector<T>> basis;
  for (std::size_t r = 0; r < re.rank(); ++r) {
    auto row = re.reduced.row(r);
    basis.emplace_back(row.begin(), row.end());
  }
  return basis;
}

/// True when v lies in the span of the given vectors.
template <typename T>
bool in_span(const std::vector<std::vector<T>>& vectors, const std::vector<T>& v) {
  const std::size_t len = v.size();
  Matrix<T> m(vectors.size() + 1, len);
  for (std::size_t r = 0; r < vectors.size(); ++r) {
    if (vectors[r].size() != len) throw InputError("span test: vector length mismatch");
    for (std::size_t c = 0; c < len; ++c) m(r, c) = vectors[r][c];
  }
  for (std::size_t c = 0; c < len; ++c) m(vectors.size(), c) = v[c];
  Matrix<T> base(vectors.size(), len);
  for (std::size_t r = 0; r < vectors.size(); ++r)
    for (std::size_t c = 0; c < len; ++c) base(r, c) = vectors[r][c];
  return matrix_rank(m) == matrix_rank(base);
}

/// Exact rank factorization M = L * R with L (rows x r), R (r x cols).
template <typename T>
std::pair<Matrix<T>, Matrix<T>> rank_factorization(const Matrix<T>& m) {
  auto re = row_reduce(m);
  const std::size_t r = re.rank();
  Matrix<T> left(m.rows(), r), right(r, m.cols());
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < m.rows(); ++i) left(i, k) = m(i, re.pivots[k]);
    for (std::size_t j = 0; j < m.cols(); ++j) right(k, j) = re.reduced(k, j);
  }
  return {std::move(left), std::move(right)};
}

/// Random invertible n x n rational matrix (resampled until the determinant is nonzero).
inline Matrix<Scalar> random_invertible(std::size_t n, RationalSampler& rng, bool complex_entries = false) {
  for (;;) {
    Matrix<Scalar> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = complex_entries ? rng.complex() : rng.real();
    if (!is_zero(determinant(m))) return m;
  }
}

inline Matrix<Scalar> random_matrix(std::size_t rows, std::size_t cols, RationalSampler& rng) {
  Matrix<Scalar> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.real();
  return m;
}

}  // namespace tenrank
