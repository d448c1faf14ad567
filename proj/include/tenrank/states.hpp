#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tenrank/tensor.hpp"

namespace tenrank {

/// Level-N GHZ state: sum_i |i>|i>|i>.
inline ExactTensor ghz_state(std::size_t levels) {
  if (levels == 0) throw InputError("GHZ level count must be positive");
  ExactTensor t(Dims{levels, levels, levels});
  for (std::size_t i = 0; i < levels; ++i) t(i, i, i) = Scalar(1);
  return t;
}

/// |001> + |010> + |100>.
inline ExactTensor w_state() {
  return make_tensor(Dims{2, 2, 2}, {{{0, 0, 1}, Scalar(1)}, {{0, 1, 0}, Scalar(1)}, {{1, 0, 0}, Scalar(1)}});
}

/// |00> + |11> shared by A and B, with a trivial C leg.
inline ExactTensor epr_state() {
  return make_tensor(Dims{2, 2, 1}, {{{0, 0, 0}, Scalar(1)}, {{1, 1, 0}, Scalar(1)}});
}

/// |000>.
inline ExactTensor product_state() { return make_tensor(Dims{2, 2, 2}, {{{0, 0, 0}, Scalar(1)}}); }

/// <m,n,p> matrix-multiplication tensor: a-index (i,k)=i*n+k, b-index (k,j)=k*p+j,
/// c-index (i,j)=i*p+j; entry 1 when the shared k agrees.
inline ExactTensor matmul_tensor(std::size_t m, std::size_t n, std::size_t p) {
  if (m == 0 || n == 0 || p == 0) throw InputError("matmul dimensions must be positive");
  ExactTensor t(Dims{m * n, n * p, m * p});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < p; ++j) t(i * n + k, k * p + j, i * p + j) = Scalar(1);
  return t;
}

/// Three EPR pairs shared pairwise: |Phi>_AB |Phi>_AC |Phi>_BC with each party
/// holding two qubits. A = |x>|y>, B = |x>|z>, C = |y>|z>.
inline ExactTensor phi3_state() {
  ExactTensor t(Dims{4, 4, 4});
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t z = 0; z < 2; ++z) t(2 * x + y, 2 * x + z, 2 * y + z) = Scalar(1);
  return t;
}

inline ExactTensor w2_state() { return tensor_product(w_state(), w_state()); }

/// n-fold tensor power (n >= 1).
inline ExactTensor tensor_power(const ExactTensor& t, std::size_t n) {
  if (n == 0) throw InputError("tensor power exponent must be positive");
  ExactTensor out = t;
  for (std::size_t i = 1; i < n; ++i) out = tensor_product(out, t);
  return out;
}

/// Builtin state names: GHZ (level n, default 2), W, EPR, PHI3, W2, PRODUCT,
/// MATMUL (uses m, n, p).
struct StateRequest {
  std::string name;
  std::size_t n = 2;
  std::size_t m = 2;
  std::size_t p = 2;
};

inline ExactTensor builtin_state(const StateRequest& req) {
  if (req.name == "GHZ") return ghz_state(req.n);
  if (req.name == "W") return w_state();
  if (req.name == "EPR") return epr_state();
  if (req.name == "PHI3") return phi3_state();
  if (req.name == "W2") return w2_state();
  if (req.name == "PRODUCT") return product_state();
  if (req.name == "MATMUL") return matmul_tensor(req.m, req.n, req.p);
  throw InputError("unknown builtin state '" + req.name + "'");
}

}  // namespace tenrank
