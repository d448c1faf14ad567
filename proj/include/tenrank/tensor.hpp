#pragma once

// Dense order-3 tensors.
//
// Index conventions (fixed; the builtin states and decompositions depend on them):
//   * entries are row-major, the a-index slowest and the c-index fastest;
//   * Kronecker products put the first factor's index in the high-order digit,
//     so (x (x) u)[i * dim(u) + j] = x[i] * u[j].
// States are unnormalized throughout.

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tenrank/errors.hpp"
#include "tenrank/matrix.hpp"
#include "tenrank/scalar.hpp"

namespace tenrank {

using Complex = std::complex<double>;

/// Hard cap on dense tensor size.
inline constexpr std::size_t kMaxTensorEntries = std::size_t{1} << 21;

enum class Leg { A = 0, B = 1, C = 2 };

inline const char* leg_name(Leg leg) {
  switch (leg) {
    case Leg::A: return "A";
    case Leg::B: return "B";
    case Leg::C: return "C";
  }
  return "?";
}

struct Dims {
  std::size_t a = 1, b = 1, c = 1;

  std::size_t size() const { return a * b * c; }
  std::size_t operator[](Leg leg) const { return leg == Leg::A ? a : leg == Leg::B ? b : c; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

inline std::string to_string(const Dims& d) {
  return "(" + std::to_string(d.a) + "," + std::to_string(d.b) + "," + std::to_string(d.c) + ")";
}

using Index3 = std::array<std::size_t, 3>;

template <typename T>
class Tensor3 {
 public:
  Tensor3() : Tensor3(Dims{1, 1, 1}) {}
  explicit Tensor3(Dims dims) : dims_(dims) {
    if (dims.a == 0 || dims.b == 0 || dims.c == 0) throw InputError("tensor dimensions must be positive");
    if (dims.a > kMaxTensorEntries || dims.b > kMaxTensorEntries || dims.c > kMaxTensorEntries ||
        dims.size() > kMaxTensorEntries)
      throw ResourceError("tensor " + to_string(dims) + " exceeds the dense entry cap");
    entries_.resize(dims.size());
  }
  Tensor3(Dims dims, std::vector<T> entries) : Tensor3(dims) {
    if (entries.size() != dims.size()) throw InputError("tensor entry count does not match dims");
    entries_ = std::move(entries);
  }

  const Dims& dims() const { return dims_; }
  std::size_t size() const { return entries_.size(); }

  std::size_t offset(std::size_t a, std::size_t b, std::size_t c) const { return (a * dims_.b + b) * dims_.c + c; }

  T& operator()(std::size_t a, std::size_t b, std::size_t c) { return entries_[offset(a, b, c)]; }
  const T& operator()(std::size_t a, std::size_t b, std::size_t c) const { return entries_[offset(a, b, c)]; }

  const std::vector<T>& entries() const { return entries_; }
  std::vector<T>& entries() { return entries_; }

  std::size_t nonzero_count() const {
    return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [](const T& x) { return !is_zero(x); }));
  }
  bool is_zero_tensor() const { return nonzero_count() == 0; }

  Tensor3& operator+=(const Tensor3& o) {
    if (!(dims_ == o.dims_)) throw InputError("tensor sum dims mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
    return *this;
  }
  friend Tensor3 operator+(Tensor3 x, const Tensor3& y) { return x += y; }

  friend bool operator==(const Tensor3& x, const Tensor3& y) { return x.dims_ == y.dims_ && x.entries_ == y.entries_; }

 private:
  Dims dims_;
  std::vector<T> entries_;
};

using ExactTensor = Tensor3<Scalar>;
using FloatTensor = Tensor3<Complex>;

struct SparseEntry {
  Index3 index;
  Scalar value;
};

/// Dense tensor with the listed entries set and all others zero.
inline ExactTensor make_tensor(Dims dims, const std::vector<SparseEntry>& entries) {
  ExactTensor t(dims);
  std::vector<bool> seen(dims.size(), false);
  for (const auto& e : entries) {
    const auto [a, b, c] = e.index;
    if (a >= dims.a || b >= dims.b || c >= dims.c)
      throw InputError("entry index (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) +
                       ") out of range for dims " + to_string(dims));
    const std::size_t off = t.offset(a, b, c);
    if (seen[off])
      throw InputError("duplicate entry index (" + std::to_string(a) + "," + std::to_string(b) + "," +
                       std::to_string(c) + ")");
    seen[off] = true;
    t.entries()[off] = e.value;
  }
  return t;
}

/// Rank-one tensor a (x) b (x) c.
template <typename T>
Tensor3<T> outer(const std::vector<T>& a, const std::vector<T>& b, const std::vector<T>& c) {
  Tensor3<T> t(Dims{a.size(), b.size(), c.size()});
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (is_zero(b[j])) continue;
      T ab = a[i] * b[j];
      for (std::size_t k = 0; k < c.size(); ++k)
        if (!is_zero(c[k])) t(i, j, k) = ab * c[k];
    }
  }
  return t;
}

/// Kronecker product of vectors, first factor in the high digit.
template <typename T>
std::vector<T> kron(const std::vector<T>& x, const std::vector<T>& y) {
  std::vector<T> out(x.size() * y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (is_zero(x[i])) continue;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (!is_zero(y[j])) out[i * y.size() + j] = x[i] * y[j];
  }
  return out;
}

/// Leg-wise Kronecker product: (x(x)y(x)z).(u(x)v(x)w) = (x(x)u)(x)(y(x)v)(x)(z(x)w).
template <typename T>
Tensor3<T> tensor_product(const Tensor3<T>& t1, const Tensor3<T>& t2) {
  const Dims d1 = t1.dims(), d2 = t2.dims();
  Tensor3<T> out(Dims{d1.a * d2.a, d1.b * d2.b, d1.c * d2.c});
  for (std::size_t a1 = 0; a1 < d1.a; ++a1)
    for (std::size_t b1 = 0; b1 < d1.b; ++b1)
      for (std::size_t c1 = 0; c1 < d1.c; ++c1) {
        const T& x = t1(a1, b1, c1);
        if (is_zero(x)) continue;
        for (std::size_t a2 = 0; a2 < d2.a; ++a2)
          for (std::size_t b2 = 0; b2 < d2.b; ++b2)
            for (std::size_t c2 = 0; c2 < d2.c; ++c2) {
              const T& y = t2(a2, b2, c2);
              if (is_zero(y)) continue;
              out(a1 * d2.a + a2, b1 * d2.b + b2, c1 * d2.c + c2) = x * y;
            }
      }
  return out;
}

/// Matrix with rows indexed by `leg` and columns by the remaining two legs (in A,B,C order).
template <typename T>
Matrix<T> flattening(const Tensor3<T>& t, Leg leg) {
  const Dims d = t.dims();
  const std::size_t rows = d[leg];
  Matrix<T> m(rows, d.size() / rows);
  for (std::size_t a = 0; a < d.a; ++a)
    for (std::size_t b = 0; b < d.b; ++b)
      for (std::size_t c = 0; c < d.c; ++c) {
        switch (leg) {
          case Leg::A: m(a, b * d.c + c) = t(a, b, c); break;
          case Leg::B: m(b, a * d.c + c) = t(a, b, c); break;
          case Leg::C: m(c, a * d.b + b) = t(a, b, c); break;
        }
      }
  return m;
}

/// Exact rank of the flattening along `leg` (equals the rank of that party's reduced density operator).
inline std::size_t flattening_rank(const ExactTensor& t, Leg leg) { return matrix_rank(flattening(t, leg)); }

inline std::array<std::size_t, 3> flattening_ranks(const ExactTensor& t) {
  return {flattening_rank(t, Leg::A), flattening_rank(t, Leg::B), flattening_rank(t, Leg::C)};
}

inline std::size_t max_flattening_rank(const ExactTensor& t) {
  auto r = flattening_ranks(t);
  return *std::max_element(r.begin(), r.end());
}

/// Operators for the three parties; each maps its leg from `cols()` to `rows()` dimensions.
template <typename T>
struct LocalOperatorTriple {
  Matrix<T> A, B, C;

  Dims input_dims() const { return Dims{A.cols(), B.cols(), C.cols()}; }
  Dims output_dims() const { return Dims{A.rows(), B.rows(), C.rows()}; }

  static LocalOperatorTriple identity(Dims d) {
    return {Matrix<T>::identity(d.a), Matrix<T>::identity(d.b), Matrix<T>::identity(d.c)};
  }
};

/// (A (x) B (x) C) T, contracting each operator's column index with the tensor leg.
template <typename T>
Tensor3<T> apply_local_operators(const LocalOperatorTriple<T>& ops, const Tensor3<T>& t) {
  const Dims in = t.dims();
  if (!(ops.input_dims() == in))
    throw InputError("local operator input dims " + to_string(ops.input_dims()) + " do not match tensor dims " +
                     to_string(in));
  const Dims out = ops.output_dims();
  // Mode products one leg at a time: A, then B, then C.
  Tensor3<T> s1(Dims{out.a, in.b, in.c});
  for (std::size_t a = 0; a < in.a; ++a)
    for (std::size_t bc = 0; bc < in.b * in.c; ++bc) {
      const T& x = t.entries()[a * in.b * in.c + bc];
      if (is_zero(x)) continue;
      for (std::size_t ao = 0; ao < out.a; ++ao)
        if (!is_zero(ops.A(ao, a))) s1.entries()[ao * in.b * in.c + bc] += ops.A(ao, a) * x;
    }
  Tensor3<T> s2(Dims{out.a, out.b, in.c});
  for (std::size_t a = 0; a < out.a; ++a)
    for (std::size_t b = 0; b < in.b; ++b)
      for (std::size_t c = 0; c < in.c; ++c) {
        const T& x = s1(a, b, c);
        if (is_zero(x)) continue;
        for (std::size_t bo = 0; bo < out.b; ++bo)
          if (!is_zero(ops.B(bo, b))) s2(a, bo, c) += ops.B(bo, b) * x;
      }
  Tensor3<T> s3(out);
  for (std::size_t a = 0; a < out.a; ++a)
    for (std::size_t b = 0; b < out.b; ++b)
      for (std::size_t c = 0; c < in.c; ++c) {
        const T& x = s2(a, b, c);
        if (is_zero(x)) continue;
        for (std::size_t co = 0; co < out.c; ++co)
          if (!is_zero(ops.C(co, c))) s3(a, b, co) += ops.C(co, c) * x;
      }
  return s3;
}

/// The c-th slice as a dA x dB matrix.
template <typename T>
Matrix<T> c_slice(const Tensor3<T>& t, std::size_t c) {
  Matrix<T> m(t.dims().a, t.dims().b);
  for (std::size_t a = 0; a < t.dims().a; ++a)
    for (std::size_t b = 0; b < t.dims().b; ++b) m(a, b) = t(a, b, c);
  return m;
}

/// Basis (reduced echelon form) of the span of the c-slices; this span is the
/// support of the reduced state on A and B.
inline std::vector<Matrix<Scalar>> support_basis(const ExactTensor& t) {
  const Dims d = t.dims();
  auto rows = row_space_basis(flattening(t, Leg::C));
  std::vector<Matrix<Scalar>> basis;
  basis.reserve(rows.size());
  for (auto& r : rows) basis.emplace_back(d.a, d.b, std::move(r));
  return basis;
}

/// Entry-wise conversion to double precision.
inline FloatTensor to_float(const ExactTensor& t) {
  std::vector<Complex> e;
  e.reserve(t.size());
  for (const auto& x : t.entries()) e.push_back(x.to_complex());
  return FloatTensor(t.dims(), std::move(e));
}

inline Matrix<Complex> to_float(const Matrix<Scalar>& m) {
  std::vector<Complex> e;
  e.reserve(m.data().size());
  for (const auto& x : m.data()) e.push_back(x.to_complex());
  return Matrix<Complex>(m.rows(), m.cols(), std::move(e));
}

inline double frobenius_norm2(const FloatTensor& t) {
  double s = 0.0;
  for (const auto& x : t.entries()) s += std::norm(x);
  return s;
}

}  // namespace tenrank
