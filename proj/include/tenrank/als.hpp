#pragma once

// Numeric rank search by alternating least squares.
//
// Each restart draws complex factors uniformly from [-1,1]^2, then cycles
// through the three factor blocks solving the ridge-regularized normal
// equations. Restarts are independent; the best one (smallest residual,
// lowest index on ties) is reported.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "tenrank/decomposition.hpp"
#include "tenrank/errors.hpp"
#include "tenrank/tensor.hpp"

namespace tenrank {

struct AlsConfig {
  std::size_t restarts = 20;
  std::size_t max_sweeps = 2000;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  double ridge = 1e-12;
  /// A sweep that improves the relative residual by less than this ends the restart.
  double min_improvement = 1e-12;
  /// Column norm beyond which a still-decreasing residual is flagged as a border-rank symptom.
  double border_norm = 1e6;
};

using FloatDecomposition = ProductDecomposition<Complex>;

struct AlsResult {
  bool found = false;
  FloatDecomposition decomposition;
  double residual = std::numeric_limits<double>::infinity();
  bool border_flag = false;
  std::size_t restart = 0;      ///< index of the reported restart
  std::size_t sweeps = 0;       ///< sweeps run by the reported restart
  double max_column_norm = 0.0; ///< largest factor column norm of the reported restart
  /// sum_k ||a_k||*||b_k||*||c_k|| / ||T||; grows without bound when terms cancel.
  double cancellation_ratio = 0.0;
};

namespace detail {

using CMatrix = Eigen::MatrixXcd;

struct AlsRun {
  CMatrix A, B, C;
  double residual = std::numeric_limits<double>::infinity();
  bool decreasing = false;
  std::size_t sweeps = 0;
  double max_column_norm = 0.0;
};

/// Unfolding with rows on `leg`; the column index runs over the other two legs in A,B,C order.
inline CMatrix unfold(const FloatTensor& t, Leg leg) {
  const Dims d = t.dims();
  const std::size_t rows = d[leg];
  CMatrix m(rows, d.size() / rows);
  for (std::size_t a = 0; a < d.a; ++a)
    for (std::size_t b = 0; b < d.b; ++b)
      for (std::size_t c = 0; c < d.c; ++c) {
        const Complex v = t(a, b, c);
        switch (leg) {
          case Leg::A: m(a, b * d.c + c) = v; break;
          case Leg::B: m(b, a * d.c + c) = v; break;
          case Leg::C: m(c, a * d.b + b) = v; break;
        }
      }
  return m;
}

/// Khatri-Rao product: row (i,j) = X(i,:) .* Y(j,:), i slowest.
inline CMatrix khatri_rao(const CMatrix& X, const CMatrix& Y) {
  CMatrix K(X.rows() * Y.rows(), X.cols());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < Y.rows(); ++j) K.row(i * Y.rows() + j) = X.row(i).cwiseProduct(Y.row(j));
  return K;
}

/// argmin_F || unfolded - F K^T ||, with ridge on the Gram matrix.
inline CMatrix solve_factor(const CMatrix& unfolded, const CMatrix& X, const CMatrix& Y, double ridge) {
  const CMatrix K = khatri_rao(X, Y);
  CMatrix gram = (X.transpose() * X.conjugate()).cwiseProduct(Y.transpose() * Y.conjugate());
  gram.diagonal().array() += ridge;
  const CMatrix rhs = unfolded * K.conjugate();
  // F * gram = rhs  <=>  gram^T F^T = rhs^T
  return gram.transpose().ldlt().solve(rhs.transpose()).transpose();
}

inline double relative_residual(const CMatrix& unfoldedA, double norm, const CMatrix& A, const CMatrix& B,
                                const CMatrix& C) {
  return (unfoldedA - A * khatri_rao(B, C).transpose()).norm() / norm;
}

inline double max_column_norm(const CMatrix& A, const CMatrix& B, const CMatrix& C) {
  double m = 0.0;
  for (const CMatrix* f : {&A, &B, &C})
    for (Eigen::Index k = 0; k < f->cols(); ++k) m = std::max(m, f->col(k).norm());
  return m;
}

}  // namespace detail

/// Alternating least squares for a rank-r approximation. Found iff the relative
/// residual ||T - sum|| / ||T|| reaches cfg.tol.
inline AlsResult als_search(const FloatTensor& t, std::size_t rank, const AlsConfig& cfg = {}) {
  using detail::CMatrix;
  if (rank == 0) throw InputError("ALS rank must be positive");
  if (cfg.restarts == 0 || cfg.max_sweeps == 0) throw InputError("ALS needs at least one restart and one sweep");
  if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol) || cfg.ridge < 0.0 || !std::isfinite(cfg.ridge))
    throw InputError("ALS tolerance must be positive and ridge non-negative");
  for (const auto& x : t.entries())
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw InputError("ALS input has non-finite entries");

  const Dims d = t.dims();
  const CMatrix TA = detail::unfold(t, Leg::A), TB = detail::unfold(t, Leg::B), TC = detail::unfold(t, Leg::C);
  const double norm = TA.norm();

  AlsResult result;
  if (norm == 0.0) {
    result.found = true;
    result.residual = 0.0;
    result.decomposition = FloatDecomposition(d, {});
    return result;
  }

  std::optional<detail::AlsRun> best;
  std::size_t best_index = 0;
  for (std::size_t restart = 0; restart < cfg.restarts; ++restart) {
    std::mt19937_64 rng(cfg.seed * 1000003ULL + restart);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    auto init = [&](std::size_t rows) {
      CMatrix m(rows, rank);
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
          const double re = unif(rng);
          const double im = unif(rng);
          m(i, k) = Complex(re, im);
        }
      return m;
    };
    detail::AlsRun run;
    run.A = init(d.a);
    run.B = init(d.b);
    run.C = init(d.c);
    double prev = detail::relative_residual(TA, norm, run.A, run.B, run.C);
    for (std::size_t sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
      run.A = detail::solve_factor(TA, run.B, run.C, cfg.ridge);
      run.B = detail::solve_factor(TB, run.A, run.C, cfg.ridge);
      run.C = detail::solve_factor(TC, run.A, run.B, cfg.ridge);
      const double res = detail::relative_residual(TA, norm, run.A, run.B, run.C);
      run.sweeps = sweep + 1;
      if (!std::isfinite(res)) break;
      run.decreasing = res < prev;
      run.residual = res;
      if (prev - res < cfg.min_improvement) break;
      prev = res;
    }
    run.max_column_norm = detail::max_column_norm(run.A, run.B, run.C);
    if (std::isfinite(run.residual) && (!best || run.residual < best->residual)) {
      best = std::move(run);
      best_index = restart;
    }
  }

  if (!best) return result;
  std::vector<ProductTerm<Complex>> terms;
  for (std::size_t k = 0; k < rank; ++k) {
    ProductTerm<Complex> term;
    for (std::size_t i = 0; i < d.a; ++i) term.a.push_back(best->A(i, k));
    for (std::size_t i = 0; i < d.b; ++i) term.b.push_back(best->B(i, k));
    for (std::size_t i = 0; i < d.c; ++i) term.c.push_back(best->C(i, k));
    auto nz = [](const std::vector<Complex>& v) {
      for (const auto& x : v)
        if (x != Complex(0.0, 0.0)) return true;
      return false;
    };
    if (nz(term.a) && nz(term.b) && nz(term.c)) terms.push_back(std::move(term));
  }
  result.decomposition = FloatDecomposition(d, std::move(terms));
  result.residual = best->residual;
  result.found = best->residual <= cfg.tol;
  result.restart = best_index;
  result.sweeps = best->sweeps;
  result.max_column_norm = best->max_column_norm;
  double term_norms = 0.0;
  for (std::size_t k = 0; k < rank; ++k)
    term_norms += best->A.col(k).norm() * best->B.col(k).norm() * best->C.col(k).norm();
  result.cancellation_ratio = term_norms / norm;
  result.border_flag = !result.found && best->decreasing && best->max_column_norm > cfg.border_norm;
  return result;
}

/// Closest p/q to x with 1 <= q <= max_den.
inline mpq_class round_rational(double x, long max_den = 64) {
  long best_p = std::lround(x);
  long best_q = 1;
  double best_err = std::abs(x - static_cast<double>(best_p));
  for (long q = 2; q <= max_den; ++q) {
    const long p = std::lround(x * static_cast<double>(q));
    const double err = std::abs(x - static_cast<double>(p) / static_cast<double>(q));
    if (err < best_err - 1e-15) {
      best_err = err;
      best_p = p;
      best_q = q;
    }
  }
  mpq_class r(best_p, static_cast<unsigned long>(best_q));
  r.canonicalize();
  return r;
}

/// Normalizes each term (b and c scaled so their largest entry is 1), rounds
/// every entry to a rational with denominator <= max_den, and keeps the result
/// only if it reconstructs `target` exactly.
inline std::optional<ExactDecomposition> rationalize(const FloatDecomposition& d, const ExactTensor& target,
                                                     long max_den = 64) {
  if (!(d.dims() == target.dims())) throw InputError("rationalize: dims mismatch");
  auto pivot = [](const std::vector<Complex>& v) {
    std::size_t p = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (std::abs(v[i]) > std::abs(v[p]) + 1e-12) p = i;
    return v[p];
  };
  auto round_vec = [max_den](const std::vector<Complex>& v) {
    std::vector<Scalar> out;
    for (const auto& x : v) out.emplace_back(round_rational(x.real(), max_den), round_rational(x.imag(), max_den));
    return out;
  };
  std::vector<ProductTerm<Scalar>> terms;
  for (const auto& term : d.terms()) {
    const Complex pb = pivot(term.b), pc = pivot(term.c);
    if (std::abs(pb) == 0.0 || std::abs(pc) == 0.0) return std::nullopt;
    std::vector<Complex> a = term.a, b = term.b, c = term.c;
    for (auto& x : a) x *= pb * pc;
    for (auto& x : b) x /= pb;
    for (auto& x : c) x /= pc;
    ProductTerm<Scalar> exact{round_vec(a), round_vec(b), round_vec(c)};
    auto all_zero = [](const std::vector<Scalar>& v) {
      for (const auto& x : v)
        if (!x.is_zero()) return false;
      return true;
    };
    if (all_zero(exact.a) || all_zero(exact.b) || all_zero(exact.c)) continue;
    terms.push_back(std::move(exact));
  }
  ExactDecomposition candidate(d.dims(), std::move(terms));
  if (verify_decomposition(target, candidate)) return candidate;
  return std::nullopt;
}

}  // namespace tenrank
