#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>

#include "tenrank/bilinear.hpp"
#include "tenrank/errors.hpp"
#include "tenrank/matrix.hpp"

namespace tenrank {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// Schoolbook product with operation counts (s^3 non-scalar products for s x s).
template <typename T>
std::pair<Matrix<T>, MulCount> naive_multiply(const Matrix<T>& x, const Matrix<T>& y) {
  if (x.cols() != y.rows()) throw InputError("matrix shapes do not chain");
  Matrix<T> out(x.rows(), y.cols());
  MulCount count;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < y.cols(); ++j) {
      T acc = x(i, 0) * y(0, j);
      for (std::size_t k = 1; k < x.cols(); ++k) acc += x(i, k) * y(k, j);
      out(i, j) = std::move(acc);
    }
  count.nonscalar_mults = x.rows() * y.cols() * x.cols();
  count.additions = x.rows() * y.cols() * (x.cols() - 1);
  return {std::move(out), count};
}

namespace detail {

template <typename T>
Matrix<T> quadrant(const Matrix<T>& m, std::size_t qi, std::size_t qj) {
  const std::size_t h = m.rows() / 2;
  Matrix<T> out(h, h);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) out(i, j) = m(qi * h + i, qj * h + j);
  return out;
}

template <typename T>
Matrix<T> add(const Matrix<T>& a, const Matrix<T>& b, MulCount& count) {
  Matrix<T> out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  count.additions += a.rows() * a.cols();
  return out;
}

template <typename T>
Matrix<T> sub(const Matrix<T>& a, const Matrix<T>& b, MulCount& count) {
  Matrix<T> out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  count.additions += a.rows() * a.cols();
  return out;
}

template <typename T>
Matrix<T> strassen_rec(const Matrix<T>& x, const Matrix<T>& y, std::size_t cutoff, MulCount& count) {
  if (x.rows() <= cutoff) {
    auto [prod, c] = naive_multiply(x, y);
    count += c;
    return std::move(prod);
  }
  const Matrix<T> x00 = quadrant(x, 0, 0), x01 = quadrant(x, 0, 1), x10 = quadrant(x, 1, 0), x11 = quadrant(x, 1, 1);
  const Matrix<T> y00 = quadrant(y, 0, 0), y01 = quadrant(y, 0, 1), y10 = quadrant(y, 1, 0), y11 = quadrant(y, 1, 1);

  // Same seven products as strassen7(); 18 block additions per level.
  const Matrix<T> m1 = strassen_rec(add(x00, x11, count), add(y00, y11, count), cutoff, count);
  const Matrix<T> m2 = strassen_rec(add(x10, x11, count), y00, cutoff, count);
  const Matrix<T> m3 = strassen_rec(x00, sub(y01, y11, count), cutoff, count);
  const Matrix<T> m4 = strassen_rec(x11, sub(y10, y00, count), cutoff, count);
  const Matrix<T> m5 = strassen_rec(add(x00, x01, count), y11, cutoff, count);
  const Matrix<T> m6 = strassen_rec(sub(x10, x00, count), add(y00, y01, count), cutoff, count);
  const Matrix<T> m7 = strassen_rec(sub(x01, x11, count), add(y10, y11, count), cutoff, count);

  const Matrix<T> c00 = add(sub(add(m1, m4, count), m5, count), m7, count);
  const Matrix<T> c01 = add(m3, m5, count);
  const Matrix<T> c10 = add(m2, m4, count);
  const Matrix<T> c11 = add(add(sub(m1, m2, count), m3, count), m6, count);

  const std::size_t h = x.rows() / 2;
  Matrix<T> out(x.rows(), x.rows());
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) {
      out(i, j) = c00(i, j);
      out(i, j + h) = c01(i, j);
      out(i + h, j) = c10(i, j);
      out(i + h, j + h) = c11(i, j);
    }
  return out;
}

}  // namespace detail

/// Recursive Strassen multiplication of square power-of-two matrices; blocks of
/// size <= cutoff use the schoolbook product. With cutoff 1 a 2^n x 2^n product
/// costs exactly 7^n non-scalar multiplications. Other shapes need `pad`, which
/// zero-pads both operands to the next power of two and crops the result.
template <typename T>
std::pair<Matrix<T>, MulCount> strassen_multiply(const Matrix<T>& x, const Matrix<T>& y, std::size_t cutoff = 1,
                                                 bool pad = false) {
  if (cutoff == 0) throw InputError("cutoff must be positive");
  if (x.cols() != y.rows()) throw InputError("matrix shapes do not chain");
  const bool square = x.rows() == x.cols() && y.rows() == y.cols();
  if (square && is_power_of_two(x.rows())) {
    MulCount count;
    Matrix<T> out = detail::strassen_rec(x, y, cutoff, count);
    return {std::move(out), count};
  }
  if (!pad)
    throw InputError("strassen_multiply needs square power-of-two operands (got " + std::to_string(x.rows()) + "x" +
                     std::to_string(x.cols()) + " by " + std::to_string(y.rows()) + "x" + std::to_string(y.cols()) +
                     "); enable padding");
  const std::size_t size = next_power_of_two(std::max({x.rows(), x.cols(), y.cols()}));
  Matrix<T> xp(size, size), yp(size, size);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) xp(i, j) = x(i, j);
  for (std::size_t i = 0; i < y.rows(); ++i)
    for (std::size_t j = 0; j < y.cols(); ++j) yp(i, j) = y(i, j);
  MulCount count;
  Matrix<T> full = detail::strassen_rec(xp, yp, cutoff, count);
  Matrix<T> out(x.rows(), y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < y.cols(); ++j) out(i, j) = full(i, j);
  return {std::move(out), count};
}

}  // namespace tenrank
