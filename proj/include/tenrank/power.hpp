#pragma once

// Tensor powers of states and decompositions without materializing them.
//
// The n-th power of an r-term decomposition has r^n terms whose vectors have
// length d^n; at r = 7, d = 4, n = 6 that is far beyond dense storage. Both
// sides are instead evaluated as trilinear forms T(x, y, z) on random rational
// probe vectors. The decomposition side uses mode-wise Kronecker matrix-vector
// products, the tensor side enumerates the nonzeros of the base tensor.

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "tenrank/decomposition.hpp"
#include "tenrank/errors.hpp"
#include "tenrank/tensor.hpp"

namespace tenrank {

inline constexpr std::size_t kDefaultTermCap = std::size_t{1} << 20;
/// Above this many terms, verification switches to randomized contraction.
inline constexpr std::size_t kDenseVerifyTermLimit = 100000;
inline constexpr std::size_t kDefaultProbeCount = 20;

namespace detail {

inline std::size_t checked_pow(std::size_t base, std::size_t n, std::size_t cap, const char* what) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (base != 0 && out > cap / base)
      throw ResourceError(std::string(what) + " " + std::to_string(base) + "^" + std::to_string(n) +
                          " exceeds cap " + std::to_string(cap));
    out *= base;
  }
  return out;
}

/// y = (M (x) M (x) ... (x) M) x with n factors; M is rows x cols, x has cols^n entries.
inline std::vector<Scalar> kron_power_matvec(const Matrix<Scalar>& m, std::size_t n, std::vector<Scalar> x) {
  std::size_t left = 1;
  std::size_t right = x.size();
  for (std::size_t mode = 0; mode < n; ++mode) {
    right /= m.cols();
    std::vector<Scalar> out(left * m.rows() * right);
    for (std::size_t l = 0; l < left; ++l)
      for (std::size_t i = 0; i < m.cols(); ++i)
        for (std::size_t s = 0; s < right; ++s) {
          const Scalar& v = x[(l * m.cols() + i) * right + s];
          if (v.is_zero()) continue;
          for (std::size_t k = 0; k < m.rows(); ++k)
            if (!m(k, i).is_zero()) out[(l * m.rows() + k) * right + s].add_product(m(k, i), v);
        }
    x = std::move(out);
    left *= m.rows();
  }
  return x;
}

}  // namespace detail

/// Term cap from TENRANK_TERM_CAP when set, else the default.
inline std::size_t term_cap_from_env() {
  if (const char* env = std::getenv("TENRANK_TERM_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) throw InputError("TENRANK_TERM_CAP must be a positive integer");
    return static_cast<std::size_t>(v);
  }
  return kDefaultTermCap;
}

/// n-fold tensor power of a state, kept as (base, n).
class TensorPower {
 public:
  TensorPower(ExactTensor base, std::size_t n) : base_(std::move(base)), n_(n) {
    if (n == 0) throw InputError("tensor power exponent must be positive");
    const std::size_t cap = std::size_t{1} << 62;
    detail::checked_pow(base_.dims().a, n, cap, "dimension");
    detail::checked_pow(base_.dims().b, n, cap, "dimension");
    detail::checked_pow(base_.dims().c, n, cap, "dimension");
    for (std::size_t a = 0; a < base_.dims().a; ++a)
      for (std::size_t b = 0; b < base_.dims().b; ++b)
        for (std::size_t c = 0; c < base_.dims().c; ++c)
          if (!base_(a, b, c).is_zero()) nonzeros_.push_back({{a, b, c}, base_(a, b, c)});
  }

  const ExactTensor& base() const { return base_; }
  std::size_t exponent() const { return n_; }
  Dims dims() const {
    const std::size_t cap = std::size_t{1} << 62;
    return Dims{detail::checked_pow(base_.dims().a, n_, cap, "dimension"),
                detail::checked_pow(base_.dims().b, n_, cap, "dimension"),
                detail::checked_pow(base_.dims().c, n_, cap, "dimension")};
  }

  ExactTensor materialize() const { return tensor_power(base_, n_); }

  /// sum_{ijk} T_ijk x_i y_j z_k, enumerating the nnz^n nonzero entries.
  Scalar contract(const std::vector<Scalar>& x, const std::vector<Scalar>& y, const std::vector<Scalar>& z) const {
    const Dims d = dims();
    if (x.size() != d.a || y.size() != d.b || z.size() != d.c) throw InputError("probe length mismatch");
    detail::checked_pow(nonzeros_.size(), n_, std::size_t{1} << 26, "nonzero enumeration");
    Scalar total;
    walk(0, 0, 0, 0, Scalar(1), x, y, z, total);
    return total;
  }

 private:
  void walk(std::size_t depth, std::size_t ia, std::size_t ib, std::size_t ic, const Scalar& coeff,
            const std::vector<Scalar>& x, const std::vector<Scalar>& y, const std::vector<Scalar>& z,
            Scalar& total) const {
    if (depth == n_) {
      if (x[ia].is_zero() || y[ib].is_zero() || z[ic].is_zero()) return;
      Scalar v = coeff * x[ia];
      v *= y[ib];
      total.add_product(v, z[ic]);
      return;
    }
    const Dims bd = base_.dims();
    for (const auto& e : nonzeros_) {
      walk(depth + 1, ia * bd.a + e.index[0], ib * bd.b + e.index[1], ic * bd.c + e.index[2],
           e.value.is_one() ? coeff : coeff * e.value, x, y, z, total);
    }
  }

  ExactTensor base_;
  std::size_t n_;
  std::vector<SparseEntry> nonzeros_;
};

/// n-fold tensor power of a decomposition: r^n terms, each the leg-wise
/// Kronecker product of one base term per copy (first copy's choice slowest).
class PowerDecomposition {
 public:
  PowerDecomposition(ExactDecomposition base, std::size_t n, std::size_t term_cap = kDefaultTermCap)
      : base_(std::move(base)), n_(n) {
    if (n == 0) throw InputError("decomposition power exponent must be positive");
    terms_ = detail::checked_pow(base_.size(), n, term_cap, "term count");
    const Dims d = base_.dims();
    ua_ = stack(d.a, [](const auto& t) -> const auto& { return t.a; });
    ub_ = stack(d.b, [](const auto& t) -> const auto& { return t.b; });
    uc_ = stack(d.c, [](const auto& t) -> const auto& { return t.c; });
  }

  const ExactDecomposition& base() const { return base_; }
  std::size_t exponent() const { return n_; }
  std::size_t size() const { return terms_; }
  Dims dims() const {
    const std::size_t cap = std::size_t{1} << 62;
    const Dims d = base_.dims();
    return Dims{detail::checked_pow(d.a, n_, cap, "dimension"), detail::checked_pow(d.b, n_, cap, "dimension"),
                detail::checked_pow(d.c, n_, cap, "dimension")};
  }

  /// Dense term list; throws ResourceError when the stored entries would exceed the dense cap.
  ExactDecomposition materialize() const {
    const Dims d = dims();
    if (terms_ * (d.a + d.b + d.c) > (std::size_t{1} << 24))
      throw ResourceError("decomposition power with " + std::to_string(terms_) + " terms is too large to materialize");
    ExactDecomposition out = base_;
    for (std::size_t i = 1; i < n_; ++i) out = decomposition_product(out, base_);
    return out;
  }

  /// sum_k (a_k . x)(b_k . y)(c_k . z).
  Scalar contract(const std::vector<Scalar>& x, const std::vector<Scalar>& y, const std::vector<Scalar>& z) const {
    const Dims d = dims();
    if (x.size() != d.a || y.size() != d.b || z.size() != d.c) throw InputError("probe length mismatch");
    auto u = detail::kron_power_matvec(ua_, n_, x);
    auto v = detail::kron_power_matvec(ub_, n_, y);
    auto w = detail::kron_power_matvec(uc_, n_, z);
    Scalar total;
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (u[k].is_zero() || v[k].is_zero() || w[k].is_zero()) continue;
      Scalar p = u[k] * v[k];
      total.add_product(p, w[k]);
    }
    return total;
  }

 private:
  template <typename Get>
  Matrix<Scalar> stack(std::size_t dim, Get get) const {
    Matrix<Scalar> m(base_.size(), dim);
    for (std::size_t k = 0; k < base_.size(); ++k)
      for (std::size_t i = 0; i < dim; ++i) m(k, i) = get(base_[k])[i];
    return m;
  }

  ExactDecomposition base_;
  std::size_t n_;
  std::size_t terms_ = 0;
  Matrix<Scalar> ua_, ub_, uc_;
};

inline PowerDecomposition decomposition_power(const ExactDecomposition& d, std::size_t n,
                                              std::size_t term_cap = kDefaultTermCap) {
  return PowerDecomposition(d, n, term_cap);
}

/// Trilinear contraction of a dense tensor.
inline Scalar contract(const ExactTensor& t, const std::vector<Scalar>& x, const std::vector<Scalar>& y,
                       const std::vector<Scalar>& z) {
  const Dims d = t.dims();
  if (x.size() != d.a || y.size() != d.b || z.size() != d.c) throw InputError("probe length mismatch");
  Scalar total;
  for (std::size_t a = 0; a < d.a; ++a)
    for (std::size_t b = 0; b < d.b; ++b)
      for (std::size_t c = 0; c < d.c; ++c) {
        const Scalar& v = t(a, b, c);
        if (v.is_zero()) continue;
        Scalar p = v * x[a];
        p *= y[b];
        total.add_product(p, z[c]);
      }
  return total;
}

inline Scalar contract(const ExactDecomposition& dec, const std::vector<Scalar>& x, const std::vector<Scalar>& y,
                       const std::vector<Scalar>& z) {
  auto dot = [](const std::vector<Scalar>& u, const std::vector<Scalar>& v) {
    Scalar s;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (!u[i].is_zero() && !v[i].is_zero()) s.add_product(u[i], v[i]);
    return s;
  };
  Scalar total;
  for (const auto& t : dec.terms()) total += dot(t.a, x) * dot(t.b, y) * dot(t.c, z);
  return total;
}

inline Scalar contract(const TensorPower& t, const std::vector<Scalar>& x, const std::vector<Scalar>& y,
                       const std::vector<Scalar>& z) {
  return t.contract(x, y, z);
}

inline Scalar contract(const PowerDecomposition& d, const std::vector<Scalar>& x, const std::vector<Scalar>& y,
                       const std::vector<Scalar>& z) {
  return d.contract(x, y, z);
}

struct RandomizedVerifyResult {
  bool match = false;
  std::size_t probes = 0;
  std::optional<std::size_t> failing_probe;

  explicit operator bool() const { return match; }
};

/// Compares target(x,y,z) and decomposition(x,y,z) exactly on `probes` random
/// rational probe triples. A mismatch is a proof of inequality; agreement on
/// all probes certifies the identity up to the Schwartz-Zippel failure bound.
template <typename Target, typename Decomp>
RandomizedVerifyResult verify_randomized(const Target& target, const Decomp& d,
                                         std::size_t probes = kDefaultProbeCount, std::uint64_t seed = 0) {
  const Dims dt = target.dims(), dd = d.dims();
  if (!(dt == dd)) throw InputError("decomposition dims " + to_string(dd) + " do not match tensor dims " + to_string(dt));
  RationalSampler rng(seed);
  auto probe = [&rng](std::size_t len) {
    std::vector<Scalar> v;
    v.reserve(len);
    for (std::size_t i = 0; i < len; ++i) v.push_back(rng.real());
    return v;
  };
  for (std::size_t p = 0; p < probes; ++p) {
    auto x = probe(dt.a), y = probe(dt.b), z = probe(dt.c);
    if (contract(target, x, y, z) != contract(d, x, y, z)) return {false, p + 1, p};
  }
  return {true, probes, std::nullopt};
}

/// Dense exact check for small powers, randomized contraction above the dense term limit.
struct PowerVerifyResult {
  bool match = false;
  bool randomized = false;
  std::size_t terms = 0;

  explicit operator bool() const { return match; }
};

inline PowerVerifyResult verify_decomposition(const TensorPower& target, const PowerDecomposition& d,
                                              std::size_t probes = kDefaultProbeCount, std::uint64_t seed = 0) {
  if (!(target.dims() == d.dims()))
    throw InputError("decomposition dims " + to_string(d.dims()) + " do not match tensor dims " +
                     to_string(target.dims()));
  if (d.size() <= kDenseVerifyTermLimit && target.dims().size() <= kMaxTensorEntries) {
    return {verify_decomposition(target.materialize(), d.materialize()).match, false, d.size()};
  }
  return {verify_randomized(target, d, probes, seed).match, true, d.size()};
}

}  // namespace tenrank
