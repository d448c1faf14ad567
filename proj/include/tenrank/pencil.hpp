#pragma once

// Exact rank test for 2x2x2 tensors via the pencil of c-slices.
//
// With all flattening ranks equal to 2 the slice pencil {x S0 + y S1}
// contains an invertible member S. Taking the other generator S', the tensor
// has rank 2 iff S' S^{-1} is diagonalizable; its eigenvalues are distinct
// exactly when the discriminant tr^2 - 4 det is nonzero, and a repeated
// eigenvalue is diagonalizable only for a scalar matrix, which would make the
// slices proportional (C-flattening rank 1, excluded above).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>

#include "tenrank/matrix.hpp"
#include "tenrank/tensor.hpp"

namespace tenrank {

enum class PencilVerdict { RankLeq2, RankGeq3, Degenerate };

inline const char* to_string(PencilVerdict v) {
  switch (v) {
    case PencilVerdict::RankLeq2: return "RankLeq2";
    case PencilVerdict::RankGeq3: return "RankGeq3";
    case PencilVerdict::Degenerate: return "Degenerate";
  }
  return "?";
}

struct PencilResult {
  PencilVerdict verdict = PencilVerdict::Degenerate;
  /// Exact rank when determined: the max flattening rank for Degenerate, 2 for RankLeq2
  /// with full flattenings, 3 for RankGeq3 (the 2x2x2 maximum).
  std::size_t rank = 0;
};

inline PencilResult rank_leq2_test_2x2x2(const ExactTensor& t) {
  if (!(t.dims() == Dims{2, 2, 2})) throw InputError("pencil test needs a 2x2x2 tensor, got " + to_string(t.dims()));
  const auto ranks = flattening_ranks(t);
  const std::size_t max_rank = *std::max_element(ranks.begin(), ranks.end());
  if (*std::min_element(ranks.begin(), ranks.end()) < 2) return {PencilVerdict::Degenerate, max_rank};

  const Matrix<Scalar> s0 = c_slice(t, 0), s1 = c_slice(t, 1);
  auto combo = [&](const Scalar& x, const Scalar& y) {
    Matrix<Scalar> m(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) m(i, j) = x * s0(i, j) + y * s1(i, j);
    return m;
  };
  // det(x S0 + y S1) is a binary quadratic form; a nonzero one vanishes on at
  // most two projective points, so one of these four candidates is invertible.
  const std::pair<Scalar, Scalar> candidates[] = {
      {Scalar(1), Scalar(0)}, {Scalar(0), Scalar(1)}, {Scalar(1), Scalar(1)}, {Scalar(1), Scalar(2)}};
  for (const auto& [x, y] : candidates) {
    const Matrix<Scalar> s = combo(x, y);
    auto s_inv = inverse(s);
    if (!s_inv) continue;
    // Second generator of the pencil, independent of s.
    const Matrix<Scalar> other = y.is_zero() ? s1 : s0;
    const Matrix<Scalar> m = other * *s_inv;
    const Scalar tr = m(0, 0) + m(1, 1);
    const Scalar det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const Scalar disc = tr * tr - Scalar(4) * det;
    if (!disc.is_zero()) return {PencilVerdict::RankLeq2, 2};
    const bool scalar_matrix = m(0, 1).is_zero() && m(1, 0).is_zero() && m(0, 0) == m(1, 1);
    // A scalar m means proportional slices, which the flattening check already excluded.
    if (scalar_matrix) return {PencilVerdict::RankLeq2, 2};
    return {PencilVerdict::RankGeq3, 3};
  }
  // Every pencil member singular: only possible when some flattening is rank-deficient.
  return {PencilVerdict::Degenerate, max_rank};
}

}  // namespace tenrank
