#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tenrank/errors.hpp"
#include "tenrank/states.hpp"
#include "tenrank/tensor.hpp"

namespace tenrank {

template <typename T>
struct ProductTerm {
  std::vector<T> a, b, c;
};

/// T = sum_k a_k (x) b_k (x) c_k. The term count is an upper bound on tensor rank.
template <typename T>
class ProductDecomposition {
 public:
  ProductDecomposition() = default;
  ProductDecomposition(Dims dims, std::vector<ProductTerm<T>> terms) : dims_(dims), terms_(std::move(terms)) {
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      const auto& t = terms_[k];
      if (t.a.size() != dims.a || t.b.size() != dims.b || t.c.size() != dims.c)
        throw InputError("term " + std::to_string(k) + " vector lengths do not match dims " + to_string(dims));
      auto all_zero = [](const std::vector<T>& v) {
        return std::all_of(v.begin(), v.end(), [](const T& x) { return is_zero(x); });
      };
      if (all_zero(t.a) || all_zero(t.b) || all_zero(t.c))
        throw InputError("term " + std::to_string(k) + " has an all-zero vector");
    }
  }

  const Dims& dims() const { return dims_; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<ProductTerm<T>>& terms() const { return terms_; }
  const ProductTerm<T>& operator[](std::size_t k) const { return terms_[k]; }

  friend bool operator==(const ProductDecomposition& x, const ProductDecomposition& y) {
    if (!(x.dims_ == y.dims_) || x.terms_.size() != y.terms_.size()) return false;
    for (std::size_t k = 0; k < x.terms_.size(); ++k)
      if (x.terms_[k].a != y.terms_[k].a || x.terms_[k].b != y.terms_[k].b || x.terms_[k].c != y.terms_[k].c)
        return false;
    return true;
  }

 private:
  Dims dims_;
  std::vector<ProductTerm<T>> terms_;
};

using ExactDecomposition = ProductDecomposition<Scalar>;

/// Dense sum of the terms.
template <typename T>
Tensor3<T> reconstruct(const ProductDecomposition<T>& d) {
  Tensor3<T> out(d.dims());
  for (const auto& term : d.terms())
    for (std::size_t i = 0; i < term.a.size(); ++i) {
      if (is_zero(term.a[i])) continue;
      for (std::size_t j = 0; j < term.b.size(); ++j) {
        if (is_zero(term.b[j])) continue;
        T ab = term.a[i] * term.b[j];
        for (std::size_t k = 0; k < term.c.size(); ++k)
          if (!is_zero(term.c[k])) out(i, j, k) += ab * term.c[k];
      }
    }
  return out;
}

struct VerifyResult {
  bool match = false;
  std::optional<Index3> first_mismatch;

  explicit operator bool() const { return match; }
};

/// Exact entrywise comparison of T against the reconstructed sum.
inline VerifyResult verify_decomposition(const ExactTensor& t, const ExactDecomposition& d) {
  if (!(t.dims() == d.dims()))
    throw InputError("decomposition dims " + to_string(d.dims()) + " do not match tensor dims " + to_string(t.dims()));
  const ExactTensor sum = reconstruct(d);
  const Dims dims = t.dims();
  for (std::size_t a = 0; a < dims.a; ++a)
    for (std::size_t b = 0; b < dims.b; ++b)
      for (std::size_t c = 0; c < dims.c; ++c)
        if (t(a, b, c) != sum(a, b, c)) return {false, Index3{a, b, c}};
  return {true, std::nullopt};
}

/// Maps every term through the local operators: the result decomposes (A(x)B(x)C)T
/// with the same term count. Zero-image terms are dropped (term count can only shrink).
template <typename T>
ProductDecomposition<T> transport(const LocalOperatorTriple<T>& ops, const ProductDecomposition<T>& d) {
  if (!(ops.input_dims() == d.dims()))
    throw InputError("local operator input dims " + to_string(ops.input_dims()) + " do not match decomposition dims " +
                     to_string(d.dims()));
  std::vector<ProductTerm<T>> terms;
  auto nonzero = [](const std::vector<T>& v) { return std::any_of(v.begin(), v.end(), [](const T& x) { return !is_zero(x); }); };
  for (const auto& term : d.terms()) {
    ProductTerm<T> out{ops.A * std::span<const T>(term.a), ops.B * std::span<const T>(term.b),
                       ops.C * std::span<const T>(term.c)};
    if (nonzero(out.a) && nonzero(out.b) && nonzero(out.c)) terms.push_back(std::move(out));
  }
  return ProductDecomposition<T>(ops.output_dims(), std::move(terms));
}

/// Leg-wise Kronecker product of two decompositions (r1 * r2 terms, first factor's term index slowest).
template <typename T>
ProductDecomposition<T> decomposition_product(const ProductDecomposition<T>& x, const ProductDecomposition<T>& y) {
  std::vector<ProductTerm<T>> terms;
  terms.reserve(x.size() * y.size());
  for (const auto& s : x.terms())
    for (const auto& t : y.terms()) terms.push_back({kron(s.a, t.a), kron(s.b, t.b), kron(s.c, t.c)});
  const Dims dx = x.dims(), dy = y.dims();
  return ProductDecomposition<T>(Dims{dx.a * dy.a, dx.b * dy.b, dx.c * dy.c}, std::move(terms));
}

namespace detail {

inline std::vector<Scalar> vec(std::initializer_list<long> values) {
  std::vector<Scalar> v;
  for (long x : values) v.emplace_back(x);
  return v;
}

inline std::vector<Scalar> unit(std::size_t n, std::size_t i) {
  std::vector<Scalar> v(n);
  v[i] = Scalar(1);
  return v;
}

}  // namespace detail

/// GHZ(N) as N diagonal terms (e_i, e_i, e_i).
inline ExactDecomposition ghz_decomposition(std::size_t levels) {
  if (levels == 0) throw InputError("GHZ level count must be positive");
  std::vector<ProductTerm<Scalar>> terms;
  for (std::size_t i = 0; i < levels; ++i)
    terms.push_back({detail::unit(levels, i), detail::unit(levels, i), detail::unit(levels, i)});
  return ExactDecomposition(Dims{levels, levels, levels}, std::move(terms));
}

/// Strassen's seven products for <2,2,2>. Index order 00,01,10,11 on each leg:
///   M1 = (x00 + x11)(y00 + y11)   -> f00, f11
///   M2 = (x10 + x11) y00          -> f10, -f11
///   M3 = x00 (y01 - y11)          -> f01, f11
///   M4 = x11 (y10 - y00)          -> f00, f10
///   M5 = (x00 + x01) y11          -> -f00, f01
///   M6 = (x10 - x00)(y00 + y01)   -> f11
///   M7 = (x01 - x11)(y10 + y11)   -> f00
inline ExactDecomposition strassen7() {
  using detail::vec;
  std::vector<ProductTerm<Scalar>> terms = {
      {vec({1, 0, 0, 1}), vec({1, 0, 0, 1}), vec({1, 0, 0, 1})},
      {vec({0, 0, 1, 1}), vec({1, 0, 0, 0}), vec({0, 0, 1, -1})},
      {vec({1, 0, 0, 0}), vec({0, 1, 0, -1}), vec({0, 1, 0, 1})},
      {vec({0, 0, 0, 1}), vec({-1, 0, 1, 0}), vec({1, 0, 1, 0})},
      {vec({1, 1, 0, 0}), vec({0, 0, 0, 1}), vec({-1, 1, 0, 0})},
      {vec({-1, 0, 1, 0}), vec({1, 1, 0, 0}), vec({0, 0, 0, 1})},
      {vec({0, 1, 0, -1}), vec({0, 0, 1, 1}), vec({1, 0, 0, 0})},
  };
  return ExactDecomposition(Dims{4, 4, 4}, std::move(terms));
}

/// Eight products for W (x) W. The bilinear forms are f = M(x) y with
///   M = [x11 x10 x01 x00; x10 0 x00 0; x01 x00 0 0; x00 0 0 0]
/// split into four rank-one blocks (one product each) plus a diagonal
/// remainder (four products).
inline ExactDecomposition fiduccia8_w2() {
  using detail::vec;
  std::vector<ProductTerm<Scalar>> terms = {
      // rank-one blocks: x_s * (sum of y over the block), added to the block's rows
      {vec({0, 0, 1, 0}), vec({1, 1, 0, 0}), vec({1, 1, 0, 0})},
      {vec({0, 1, 0, 0}), vec({1, 0, 1, 0}), vec({1, 0, 1, 0})},
      {vec({1, 0, 0, 0}), vec({1, 0, 0, 1}), vec({1, 0, 0, 1})},
      {vec({1, 0, 0, 0}), vec({0, 1, 1, 0}), vec({0, 1, 1, 0})},
      // diagonal remainder
      {vec({-1, -1, -1, 1}), vec({1, 0, 0, 0}), vec({1, 0, 0, 0})},
      {vec({-1, 0, -1, 0}), vec({0, 1, 0, 0}), vec({0, 1, 0, 0})},
      {vec({-1, -1, 0, 0}), vec({0, 0, 1, 0}), vec({0, 0, 1, 0})},
      {vec({-1, 0, 0, 0}), vec({0, 0, 0, 1}), vec({0, 0, 0, 1})},
  };
  return ExactDecomposition(Dims{4, 4, 4}, std::move(terms));
}

/// Three-term witness for W: |001>+|010>+|100>.
inline ExactDecomposition w3_decomposition() {
  using detail::unit;
  std::vector<ProductTerm<Scalar>> terms = {
      {unit(2, 0), unit(2, 0), unit(2, 1)},
      {unit(2, 0), unit(2, 1), unit(2, 0)},
      {unit(2, 1), unit(2, 0), unit(2, 0)},
  };
  return ExactDecomposition(Dims{2, 2, 2}, std::move(terms));
}

/// Exact witness from slice-wise rank factorizations along the cheapest leg:
/// T = sum_x e_x (x) M_x with each slice M_x split into rank(M_x) products.
inline ExactDecomposition slice_witness(const ExactTensor& t) {
  const Dims d = t.dims();
  std::optional<ExactDecomposition> best;
  for (Leg leg : {Leg::A, Leg::B, Leg::C}) {
    std::vector<ProductTerm<Scalar>> terms;
    for (std::size_t x = 0; x < d[leg]; ++x) {
      // slice with the two remaining legs as rows/cols, in A,B,C order
      const std::size_t r = leg == Leg::A ? d.b : d.a;
      const std::size_t cdim = leg == Leg::C ? d.b : d.c;
      Matrix<Scalar> slice(r, cdim);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < cdim; ++j)
          slice(i, j) = leg == Leg::A ? t(x, i, j) : leg == Leg::B ? t(i, x, j) : t(i, j, x);
      auto [left, right] = rank_factorization(slice);
      for (std::size_t k = 0; k < left.cols(); ++k) {
        auto u = left.column(k);
        auto row = right.row(k);
        std::vector<Scalar> v(row.begin(), row.end());
        auto e = detail::unit(d[leg], x);
        switch (leg) {
          case Leg::A: terms.push_back({std::move(e), std::move(u), std::move(v)}); break;
          case Leg::B: terms.push_back({std::move(u), std::move(e), std::move(v)}); break;
          case Leg::C: terms.push_back({std::move(u), std::move(v), std::move(e)}); break;
        }
      }
    }
    if (!best || terms.size() < best->size()) best = ExactDecomposition(d, std::move(terms));
  }
  return *best;
}

}  // namespace tenrank
