#pragma once

// Decompositions as bilinear programs.
//
// A decomposition sum_k a_k (x) b_k (x) c_k of a tensor T is the same thing as
// a program computing the bilinear forms f_l(x, y) = sum_{ij} T_ijl x_i y_j
// with one non-scalar multiplication per term:
//     M_k = (a_k . x) * (b_k . y),   f_l = sum_k c_k[l] * M_k.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tenrank/decomposition.hpp"
#include "tenrank/errors.hpp"
#include "tenrank/states.hpp"
#include "tenrank/tensor.hpp"

namespace tenrank {

/// Executed operation counts. Only products of an x-side quantity with a
/// y-side quantity are non-scalar; multiplications by constants count as additions.
struct MulCount {
  std::size_t nonscalar_mults = 0;
  std::size_t additions = 0;

  MulCount& operator+=(const MulCount& o) {
    nonscalar_mults += o.nonscalar_mults;
    additions += o.additions;
    return *this;
  }
  friend MulCount operator+(MulCount a, const MulCount& b) { return a += b; }
  friend bool operator==(const MulCount&, const MulCount&) = default;
};

struct MatmulShape {
  std::size_t m = 0, n = 0, p = 0;
  friend bool operator==(const MatmulShape&, const MatmulShape&) = default;
};

class BilinearProgram {
 public:
  /// u: r x dA (x-side forms), v: r x dB (y-side forms), w: dC x r (output recombination).
  BilinearProgram(Matrix<Scalar> u, Matrix<Scalar> v, Matrix<Scalar> w)
      : u_(std::move(u)), v_(std::move(v)), w_(std::move(w)) {
    if (u_.rows() != v_.rows() || w_.cols() != u_.rows())
      throw InputError("bilinear program term counts disagree");
  }

  std::size_t terms() const { return u_.rows(); }
  const Matrix<Scalar>& u() const { return u_; }
  const Matrix<Scalar>& v() const { return v_; }
  const Matrix<Scalar>& w() const { return w_; }
  Dims dims() const { return Dims{u_.cols(), v_.cols(), w_.rows()}; }

  /// Shape this program has been checked to multiply, if any.
  const std::optional<MatmulShape>& certified_shape() const { return certified_; }

  /// Checks the program's coefficient tensor against <m,n,p> exactly and records the result.
  bool certify_matmul(std::size_t m, std::size_t n, std::size_t p);

  /// f = (f_0, ..., f_{dC-1}) on concrete inputs, with operation counts.
  std::pair<std::vector<Scalar>, MulCount> evaluate(std::span<const Scalar> x, std::span<const Scalar> y) const {
    if (x.size() != u_.cols() || y.size() != v_.cols()) throw InputError("bilinear program input length mismatch");
    MulCount count;
    std::vector<Scalar> products(terms());
    for (std::size_t k = 0; k < terms(); ++k) {
      Scalar lx = linear_form(u_.row(k), x, count);
      Scalar ly = linear_form(v_.row(k), y, count);
      products[k] = lx * ly;
      ++count.nonscalar_mults;
    }
    std::vector<Scalar> f(w_.rows());
    for (std::size_t l = 0; l < w_.rows(); ++l) f[l] = linear_form(w_.row(l), products, count);
    return {std::move(f), count};
  }

 private:
  static Scalar linear_form(std::span<const Scalar> coeffs, std::span<const Scalar> values, MulCount& count) {
    Scalar acc;
    bool first = true;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const Scalar& c = coeffs[i];
      if (c.is_zero()) continue;
      if (!first) ++count.additions;
      if (c.is_one()) {
        acc += values[i];
      } else if (c == Scalar(-1)) {
        acc -= values[i];
      } else {
        ++count.additions;  // scalar-by-constant multiplication
        acc.add_product(c, values[i]);
      }
      first = false;
    }
    return acc;
  }

  Matrix<Scalar> u_, v_, w_;
  std::optional<MatmulShape> certified_;
};

inline BilinearProgram to_bilinear(const ExactDecomposition& d) {
  const Dims dims = d.dims();
  const std::size_t r = d.size();
  Matrix<Scalar> u(r, dims.a), v(r, dims.b), w(dims.c, r);
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < dims.a; ++i) u(k, i) = d[k].a[i];
    for (std::size_t j = 0; j < dims.b; ++j) v(k, j) = d[k].b[j];
    for (std::size_t l = 0; l < dims.c; ++l) w(l, k) = d[k].c[l];
  }
  return BilinearProgram(std::move(u), std::move(v), std::move(w));
}

inline ExactDecomposition from_bilinear(const BilinearProgram& p) {
  std::vector<ProductTerm<Scalar>> terms;
  for (std::size_t k = 0; k < p.terms(); ++k) {
    auto ur = p.u().row(k);
    auto vr = p.v().row(k);
    terms.push_back({std::vector<Scalar>(ur.begin(), ur.end()), std::vector<Scalar>(vr.begin(), vr.end()),
                     p.w().column(k)});
  }
  return ExactDecomposition(p.dims(), std::move(terms));
}

/// Coefficient of x_i y_j in f_l, as a tensor (i, j, l).
inline ExactTensor bilinear_coefficients(const BilinearProgram& p) { return reconstruct(from_bilinear(p)); }

inline bool BilinearProgram::certify_matmul(std::size_t m, std::size_t n, std::size_t p) {
  const ExactTensor target = matmul_tensor(m, n, p);
  if (!(target.dims() == dims()) || !verify_decomposition(target, from_bilinear(*this))) return false;
  certified_ = MatmulShape{m, n, p};
  return true;
}

template <typename T>
Matrix<T> naive_product(const Matrix<T>& x, const Matrix<T>& y) {
  return x * y;
}

/// Multiplies X (m x n) by Y (n x p) with a program certified for <m,n,p>.
inline std::pair<Matrix<Scalar>, MulCount> run_bilinear_matmul(const BilinearProgram& prog, const Matrix<Scalar>& x,
                                                               const Matrix<Scalar>& y) {
  if (x.cols() != y.rows()) throw InputError("matrix shapes do not chain");
  if (!prog.certified_shape()) throw StateError("bilinear program has not been certified as a matmul algorithm");
  const MatmulShape shape{x.rows(), x.cols(), y.cols()};
  if (!(*prog.certified_shape() == shape))
    throw InputError("program certified for <" + std::to_string(prog.certified_shape()->m) + "," +
                     std::to_string(prog.certified_shape()->n) + "," + std::to_string(prog.certified_shape()->p) +
                     ">, inputs are <" + std::to_string(shape.m) + "," + std::to_string(shape.n) + "," +
                     std::to_string(shape.p) + ">");
  // Row-major vectorization matches the index convention of matmul_tensor.
  auto [f, count] = prog.evaluate(x.data(), y.data());
  return {Matrix<Scalar>(shape.m, shape.p, std::move(f)), count};
}

/// Local relabeling taking <2,2,2> to the three-EPR triangle state: A swaps its
/// two qubits (|i k> -> |k i>), B and C act as the identity.
inline LocalOperatorTriple<Scalar> phi3_matmul_witness() {
  Matrix<Scalar> swap(4, 4);
  swap(0, 0) = Scalar(1);
  swap(2, 1) = Scalar(1);
  swap(1, 2) = Scalar(1);
  swap(3, 3) = Scalar(1);
  return {std::move(swap), Matrix<Scalar>::identity(4), Matrix<Scalar>::identity(4)};
}

/// Strassen's decomposition carried to the triangle state: a 7-term expansion of PHI3.
inline ExactDecomposition strassen7_phi3() { return transport(phi3_matmul_witness(), strassen7()); }

}  // namespace tenrank
