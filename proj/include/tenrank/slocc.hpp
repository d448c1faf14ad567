#pragma once

// Stochastic local conversions out of GHZ-type states.
//
// A target with an r-term decomposition is reachable from GHZ(N), N >= r, by
// the local maps A e_i = a_i (i < r), A e_i = 0 (i >= r), and likewise for B
// and C. Each party implements its map as the first element of the two-outcome
// measurement {M, sqrt(I - M^dag M)} with M = A / ||A||, so the protocol
// succeeds with the probability that all three parties see that outcome.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tenrank/als.hpp"
#include "tenrank/bilinear.hpp"
#include "tenrank/decomposition.hpp"
#include "tenrank/errors.hpp"
#include "tenrank/pencil.hpp"
#include "tenrank/rank_facts.hpp"
#include "tenrank/states.hpp"
#include "tenrank/tensor.hpp"

namespace tenrank {

/// Dense operator assembly cap on the GHZ level count.
inline constexpr std::size_t kMaxProtocolLevels = std::size_t{1} << 14;

struct SloccProtocol {
  LocalOperatorTriple<Scalar> exact_ops;  ///< unscaled operators built from the witness
  std::array<double, 3> norms{};           ///< largest singular value of each exact operator
  LocalOperatorTriple<Complex> ops;        ///< exact_ops[i] / norms[i]
  std::size_t source_dim = 0;
  double success_probability = 0.0;
  ExactTensor target;                      ///< exact outcome of exact_ops on GHZ(source_dim)
};

inline double largest_singular_value(const Matrix<Complex>& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  // The smaller Gram matrix has the same nonzero spectrum.
  const Eigen::MatrixXcd gram = e.rows() <= e.cols() ? Eigen::MatrixXcd(e * e.adjoint()) : Eigen::MatrixXcd(e.adjoint() * e);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

/// Simulated outcome of a protocol on a source state.
struct SimulationResult {
  FloatTensor outcome;
  double probability = 0.0;
};

/// Outcome of the scaled operators on `source`; probability = ||outcome||^2 / ||source||^2.
inline SimulationResult simulate(const SloccProtocol& p, const FloatTensor& source) {
  if (!(source.dims() == p.ops.input_dims()))
    throw InputError("source dims " + to_string(source.dims()) + " do not match protocol input dims " +
                     to_string(p.ops.input_dims()));
  const double source_norm2 = frobenius_norm2(source);
  if (source_norm2 == 0.0) throw InputError("source state is zero");
  FloatTensor out = apply_local_operators(p.ops, source);
  const double prob = frobenius_norm2(out) / source_norm2;
  return {std::move(out), prob};
}

/// simulate() on GHZ(source_dim) without materializing the source: the outcome
/// is sum_i A e_i (x) B e_i (x) C e_i.
inline SimulationResult simulate_ghz(const SloccProtocol& p) {
  const std::size_t n = p.source_dim;
  FloatTensor out(p.ops.output_dims());
  for (std::size_t i = 0; i < n; ++i) {
    auto a = p.ops.A.column(i), b = p.ops.B.column(i), c = p.ops.C.column(i);
    for (std::size_t x = 0; x < a.size(); ++x) {
      if (a[x] == Complex{}) continue;
      for (std::size_t y = 0; y < b.size(); ++y) {
        if (b[y] == Complex{}) continue;
        const Complex ab = a[x] * b[y];
        for (std::size_t z = 0; z < c.size(); ++z) out(x, y, z) += ab * c[z];
      }
    }
  }
  const double prob = frobenius_norm2(out) / static_cast<double>(n);
  return {std::move(out), prob};
}

/// ||o - alpha t|| / ||o|| with the best complex alpha: zero iff o is parallel to t.
inline double relative_deviation(const FloatTensor& outcome, const FloatTensor& target) {
  if (!(outcome.dims() == target.dims())) throw InputError("relative_deviation: dims mismatch");
  Complex inner{};
  double tt = 0.0, oo = 0.0;
  for (std::size_t i = 0; i < outcome.size(); ++i) {
    inner += std::conj(target.entries()[i]) * outcome.entries()[i];
    tt += std::norm(target.entries()[i]);
    oo += std::norm(outcome.entries()[i]);
  }
  if (tt == 0.0 || oo == 0.0) return std::numeric_limits<double>::infinity();
  const Complex alpha = inner / tt;
  double dev = 0.0;
  for (std::size_t i = 0; i < outcome.size(); ++i) dev += std::norm(outcome.entries()[i] - alpha * target.entries()[i]);
  return std::sqrt(dev / oo);
}

/// |<t, o>|^2 / (||t||^2 ||o||^2).
inline double fidelity(const FloatTensor& outcome, const FloatTensor& target) {
  Complex inner{};
  double tt = 0.0, oo = 0.0;
  for (std::size_t i = 0; i < outcome.size(); ++i) {
    inner += std::conj(target.entries()[i]) * outcome.entries()[i];
    tt += std::norm(target.entries()[i]);
    oo += std::norm(outcome.entries()[i]);
  }
  if (tt == 0.0 || oo == 0.0) return 0.0;
  return std::norm(inner) / (tt * oo);
}

/// GHZ(levels) -> reconstruct(d) protocol from an r-term decomposition, r <= levels.
inline SloccProtocol build_protocol(const ExactDecomposition& d, std::size_t levels) {
  const std::size_t r = d.size();
  if (levels < r)
    throw InputError("GHZ level count " + std::to_string(levels) + " is below the witness term count " +
                     std::to_string(r));
  if (levels > kMaxProtocolLevels)
    throw ResourceError("GHZ level count " + std::to_string(levels) + " exceeds the dense operator cap " +
                        std::to_string(kMaxProtocolLevels));
  const Dims dims = d.dims();
  SloccProtocol p;
  p.source_dim = levels;
  p.exact_ops = {Matrix<Scalar>(dims.a, levels), Matrix<Scalar>(dims.b, levels), Matrix<Scalar>(dims.c, levels)};
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t x = 0; x < dims.a; ++x) p.exact_ops.A(x, i) = d[i].a[x];
    for (std::size_t x = 0; x < dims.b; ++x) p.exact_ops.B(x, i) = d[i].b[x];
    for (std::size_t x = 0; x < dims.c; ++x) p.exact_ops.C(x, i) = d[i].c[x];
  }
  // (A(x)B(x)C) GHZ(N) = sum_{i<r} a_i (x) b_i (x) c_i, exactly.
  p.target = reconstruct(d);
  if (p.target.is_zero_tensor()) throw InputError("witness reconstructs the zero tensor; no protocol exists");

  const Matrix<Complex> fa = to_float(p.exact_ops.A), fb = to_float(p.exact_ops.B), fc = to_float(p.exact_ops.C);
  p.norms = {largest_singular_value(fa), largest_singular_value(fb), largest_singular_value(fc)};
  auto scaled = [](Matrix<Complex> m, double s) {
    std::vector<Complex> e = m.data();
    for (auto& x : e) x /= s;
    return Matrix<Complex>(m.rows(), m.cols(), std::move(e));
  };
  p.ops = {scaled(fa, p.norms[0]), scaled(fb, p.norms[1]), scaled(fc, p.norms[2])};
  const double scale2 = std::pow(p.norms[0] * p.norms[1] * p.norms[2], 2);
  p.success_probability = frobenius_norm2(to_float(p.target)) / (scale2 * static_cast<double>(levels));
  return p;
}

/// Same as above but checks the witness against an explicit target first.
inline SloccProtocol build_protocol(const ExactTensor& target, const ExactDecomposition& d, std::size_t levels) {
  if (!verify_decomposition(target, d)) throw InputError("witness does not reconstruct the target");
  return build_protocol(d, levels);
}

// ---------------------------------------------------------------------------
// Three-qubit classes

enum class ThreeQubitClass { Zero, Product, Bisep_A_BC, Bisep_B_AC, Bisep_C_AB, W, GHZ };

inline const char* to_string(ThreeQubitClass c) {
  switch (c) {
    case ThreeQubitClass::Zero: return "Zero";
    case ThreeQubitClass::Product: return "Product";
    case ThreeQubitClass::Bisep_A_BC: return "Bisep_A_BC";
    case ThreeQubitClass::Bisep_B_AC: return "Bisep_B_AC";
    case ThreeQubitClass::Bisep_C_AB: return "Bisep_C_AB";
    case ThreeQubitClass::W: return "W";
    case ThreeQubitClass::GHZ: return "GHZ";
  }
  return "?";
}

/// Cayley's 2x2x2 hyperdeterminant.
inline Scalar hyperdeterminant(const ExactTensor& t) {
  if (!(t.dims() == Dims{2, 2, 2})) throw InputError("hyperdeterminant needs a 2x2x2 tensor");
  auto e = [&t](int a, int b, int c) -> const Scalar& { return t(a, b, c); };
  const Scalar &t000 = e(0, 0, 0), &t001 = e(0, 0, 1), &t010 = e(0, 1, 0), &t011 = e(0, 1, 1);
  const Scalar &t100 = e(1, 0, 0), &t101 = e(1, 0, 1), &t110 = e(1, 1, 0), &t111 = e(1, 1, 1);
  Scalar sq = t000 * t000 * t111 * t111 + t001 * t001 * t110 * t110 + t010 * t010 * t101 * t101 +
              t100 * t100 * t011 * t011;
  Scalar two = t000 * t001 * t110 * t111 + t000 * t010 * t101 * t111 + t000 * t011 * t100 * t111 +
               t001 * t010 * t101 * t110 + t001 * t011 * t100 * t110 + t010 * t011 * t100 * t101;
  Scalar four = t000 * t011 * t101 * t110 + t001 * t010 * t100 * t111;
  return sq - Scalar(2) * two + Scalar(4) * four;
}

inline ThreeQubitClass classify_three_qubit(const ExactTensor& t) {
  if (!(t.dims() == Dims{2, 2, 2})) throw InputError("three-qubit classifier needs dims (2,2,2), got " + to_string(t.dims()));
  if (t.is_zero_tensor()) return ThreeQubitClass::Zero;
  const auto r = flattening_ranks(t);
  const int ones = (r[0] == 1) + (r[1] == 1) + (r[2] == 1);
  if (ones == 3) return ThreeQubitClass::Product;
  if (ones == 1) {
    if (r[0] == 1) return ThreeQubitClass::Bisep_A_BC;
    if (r[1] == 1) return ThreeQubitClass::Bisep_B_AC;
    return ThreeQubitClass::Bisep_C_AB;
  }
  // Two rank-one legs force the third to rank one as well.
  if (ones != 0) throw std::logic_error("inconsistent flattening ranks");
  return hyperdeterminant(t).is_zero() ? ThreeQubitClass::W : ThreeQubitClass::GHZ;
}

// ---------------------------------------------------------------------------
// Convertibility

enum class VerdictKind { Yes, No, Unknown };

inline const char* to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::Yes: return "yes";
    case VerdictKind::No: return "no";
    case VerdictKind::Unknown: return "unknown";
  }
  return "?";
}

struct ConvertVerdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::optional<ExactDecomposition> witness;  ///< Yes: verified, at most N terms
  std::size_t lower_bound = 0;
  std::optional<std::size_t> upper_bound;
  std::string reason;
};

struct DecideOptions {
  /// Try ALS + rationalization when the bounds leave the answer open.
  bool search = true;
  AlsConfig als{.restarts = 5};
  /// Skip the search for tensors with more entries than this.
  std::size_t search_max_entries = 512;
};

/// Builtin decompositions whose target equals `t` exactly.
inline std::vector<ExactDecomposition> builtin_witnesses_for(const ExactTensor& t) {
  std::vector<ExactDecomposition> candidates = {strassen7(), strassen7_phi3(), fiduccia8_w2(), w3_decomposition()};
  const Dims d = t.dims();
  if (d.a == d.b && d.b == d.c) candidates.push_back(ghz_decomposition(d.a));
  std::vector<ExactDecomposition> out;
  for (auto& c : candidates)
    if (c.dims() == d && verify_decomposition(t, c)) out.push_back(std::move(c));
  return out;
}

/// Best lower bound: max flattening rank or a registered exact rank.
inline std::size_t rank_lower_bound(const ExactTensor& t, const RankFacts& facts = RankFacts::defaults(),
                                    std::string* source = nullptr) {
  std::size_t lb = max_flattening_rank(t);
  if (source) *source = "flattening rank";
  if (auto f = facts.lookup(t); f && f->rank > lb) {
    lb = f->rank;
    if (source) *source = "registered rank of " + f->name + " (" + f->note + ")";
  }
  return lb;
}

/// Can GHZ(N) be converted to `target` by SLOCC? Yes iff rank(target) <= N.
inline ConvertVerdict decide_ghz_conversion(const ExactTensor& target, std::size_t levels,
                                            const std::optional<ExactDecomposition>& witness = std::nullopt,
                                            const RankFacts& facts = RankFacts::defaults(),
                                            const DecideOptions& opts = {}) {
  if (levels == 0) throw InputError("GHZ level count must be positive");
  if (witness && !verify_decomposition(target, *witness)) throw InputError("witness does not reconstruct the target");

  ConvertVerdict v;
  std::string lb_source;
  v.lower_bound = rank_lower_bound(target, facts, &lb_source);

  std::optional<ExactDecomposition> best = witness;
  auto consider = [&best](ExactDecomposition d) {
    if (!best || d.size() < best->size()) best = std::move(d);
  };
  for (auto& d : builtin_witnesses_for(target)) consider(std::move(d));
  consider(slice_witness(target));
  v.upper_bound = best->size();

  if (v.lower_bound > levels) {
    v.kind = VerdictKind::No;
    v.reason = "rank lower bound " + std::to_string(v.lower_bound) + " (" + lb_source + ") exceeds " +
               std::to_string(levels);
    return v;
  }
  if (best->size() <= levels) {
    v.kind = VerdictKind::Yes;
    v.reason = std::to_string(best->size()) + "-term witness fits in GHZ(" + std::to_string(levels) + ")";
    v.witness = std::move(best);
    return v;
  }
  if (opts.search && target.size() <= opts.search_max_entries) {
    const AlsResult found = als_search(to_float(target), levels, opts.als);
    if (found.found) {
      if (auto exact = rationalize(found.decomposition, target)) {
        v.kind = VerdictKind::Yes;
        v.upper_bound = exact->size();
        v.reason = "numeric search found a " + std::to_string(exact->size()) + "-term witness, verified exactly";
        v.witness = std::move(exact);
        return v;
      }
    }
  }
  v.kind = VerdictKind::Unknown;
  v.reason = "rank is between " + std::to_string(v.lower_bound) + " and " + std::to_string(*v.upper_bound);
  return v;
}

/// Bipartite states (dC = 1): convertible iff the source's Schmidt rank is at least the target's.
inline bool bipartite_convertible(const ExactTensor& source, const ExactTensor& target) {
  if (source.dims().c != 1 || target.dims().c != 1) throw InputError("bipartite states must have dC = 1");
  return flattening_rank(source, Leg::A) >= flattening_rank(target, Leg::A);
}

struct SchmidtBounds {
  double lower = 0.0;
  std::optional<double> upper;
};

/// log2 of the rank bounds; the lower side uses flattenings or registered ranks.
inline SchmidtBounds schmidt_measure_bounds(const ExactTensor& t,
                                            const std::optional<ExactDecomposition>& witness = std::nullopt,
                                            const RankFacts& facts = RankFacts::defaults()) {
  if (witness && !verify_decomposition(t, *witness)) throw InputError("witness does not reconstruct the tensor");
  const std::size_t lb = rank_lower_bound(t, facts);
  SchmidtBounds out;
  out.lower = lb == 0 ? -std::numeric_limits<double>::infinity() : std::log2(static_cast<double>(lb));
  if (witness)
    out.upper = witness->size() == 0 ? -std::numeric_limits<double>::infinity()
                                     : std::log2(static_cast<double>(witness->size()));
  return out;
}

}  // namespace tenrank
