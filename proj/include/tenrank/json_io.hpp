#pragma once

// File formats. Rationals are "p/q" strings of decimal integers.
//
//   tensor:        {"dims":[dA,dB,dC],"entries":[{"i":[a,b,c],"re":"p/q","im":"p/q"},...]}
//   decomposition: {"dims":[...],"exact":true,"terms":[{"a":[s,...],"b":[...],"c":[...]},...]}
//                  s is "p/q" for real values or {"re":"p/q","im":"p/q"};
//                  float decompositions use {"re":x,"im":y} numbers and "exact":false
//   matrix:        {"rows":R,"cols":C,"data":[[s,...],...]}

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include "tenrank/als.hpp"
#include "tenrank/decomposition.hpp"
#include "tenrank/errors.hpp"
#include "tenrank/slocc.hpp"
#include "tenrank/tensor.hpp"

namespace tenrank::io {

using nlohmann::json;

inline json scalar_to_json(const Scalar& s) {
  if (s.is_real()) return format_rational(s.real());
  return json{{"re", format_rational(s.real())}, {"im", format_rational(s.imag())}};
}

inline Scalar scalar_from_json(const json& j) {
  if (j.is_string()) return Scalar(parse_rational(j.get<std::string>()));
  if (j.is_number_integer()) return Scalar(j.get<long>());
  if (j.is_object()) {
    mpq_class re = j.contains("re") ? parse_rational(j.at("re").get<std::string>()) : mpq_class(0);
    mpq_class im = j.contains("im") ? parse_rational(j.at("im").get<std::string>()) : mpq_class(0);
    return Scalar(re, im);
  }
  throw InputError("scalar must be a \"p/q\" string or {\"re\",\"im\"} object");
}

inline json complex_to_json(const Complex& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline json dims_to_json(const Dims& d) { return json::array({d.a, d.b, d.c}); }

inline Dims dims_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw InputError("\"dims\" must be an array of three positive integers");
  Dims d;
  std::size_t* out[3] = {&d.a, &d.b, &d.c};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!j[i].is_number_integer() || j[i].get<long long>() <= 0)
      throw InputError("\"dims\" must be an array of three positive integers");
    *out[i] = j[i].get<std::size_t>();
  }
  return d;
}

template <typename Fn>
auto guarded(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

// --- tensors ---------------------------------------------------------------

inline json tensor_to_json(const ExactTensor& t) {
  json entries = json::array();
  const Dims d = t.dims();
  for (std::size_t a = 0; a < d.a; ++a)
    for (std::size_t b = 0; b < d.b; ++b)
      for (std::size_t c = 0; c < d.c; ++c) {
        const Scalar& v = t(a, b, c);
        if (v.is_zero()) continue;
        entries.push_back(
            {{"i", json::array({a, b, c})}, {"re", format_rational(v.real())}, {"im", format_rational(v.imag())}});
      }
  return json{{"dims", dims_to_json(d)}, {"entries", std::move(entries)}};
}

inline ExactTensor tensor_from_json(const json& j) {
  return guarded([&] {
    const Dims d = dims_from_json(j.at("dims"));
    std::vector<SparseEntry> entries;
    for (const auto& e : j.at("entries")) {
      const auto& idx = e.at("i");
      if (!idx.is_array() || idx.size() != 3) throw InputError("entry index must have three components");
      Index3 index{};
      for (std::size_t i = 0; i < 3; ++i) {
        if (!idx[i].is_number_integer() || idx[i].get<long long>() < 0) throw InputError("entry index out of range");
        index[i] = idx[i].get<std::size_t>();
      }
      mpq_class re = e.contains("re") ? parse_rational(e.at("re").get<std::string>()) : mpq_class(0);
      mpq_class im = e.contains("im") ? parse_rational(e.at("im").get<std::string>()) : mpq_class(0);
      entries.push_back({index, Scalar(re, im)});
    }
    return make_tensor(d, entries);
  });
}

inline json float_tensor_to_json(const FloatTensor& t) {
  json entries = json::array();
  const Dims d = t.dims();
  for (std::size_t a = 0; a < d.a; ++a)
    for (std::size_t b = 0; b < d.b; ++b)
      for (std::size_t c = 0; c < d.c; ++c) {
        const Complex v = t(a, b, c);
        if (v == Complex{}) continue;
        entries.push_back({{"i", json::array({a, b, c})}, {"re", v.real()}, {"im", v.imag()}});
      }
  return json{{"dims", dims_to_json(d)}, {"entries", std::move(entries)}, {"exact", false}};
}

// --- decompositions --------------------------------------------------------

inline json decomposition_to_json(const ExactDecomposition& d) {
  json terms = json::array();
  auto vec = [](const std::vector<Scalar>& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(scalar_to_json(x));
    return out;
  };
  for (const auto& t : d.terms()) terms.push_back({{"a", vec(t.a)}, {"b", vec(t.b)}, {"c", vec(t.c)}});
  return json{{"dims", dims_to_json(d.dims())}, {"exact", true}, {"terms", std::move(terms)}};
}

inline json decomposition_to_json(const FloatDecomposition& d) {
  json terms = json::array();
  auto vec = [](const std::vector<Complex>& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(complex_to_json(x));
    return out;
  };
  for (const auto& t : d.terms()) terms.push_back({{"a", vec(t.a)}, {"b", vec(t.b)}, {"c", vec(t.c)}});
  return json{{"dims", dims_to_json(d.dims())}, {"exact", false}, {"terms", std::move(terms)}};
}

inline ExactDecomposition decomposition_from_json(const json& j) {
  return guarded([&] {
    if (j.contains("exact") && !j.at("exact").get<bool>())
      throw InputError("expected an exact decomposition (got \"exact\": false)");
    const Dims d = dims_from_json(j.at("dims"));
    auto vec = [](const json& arr) {
      std::vector<Scalar> v;
      for (const auto& x : arr) v.push_back(scalar_from_json(x));
      return v;
    };
    std::vector<ProductTerm<Scalar>> terms;
    for (const auto& t : j.at("terms")) terms.push_back({vec(t.at("a")), vec(t.at("b")), vec(t.at("c"))});
    return ExactDecomposition(d, std::move(terms));
  });
}

// --- matrices --------------------------------------------------------------

inline json matrix_to_json(const Matrix<Scalar>& m) {
  json data = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m(r, c)));
    data.push_back(std::move(row));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline Matrix<Scalar> matrix_from_json(const json& j) {
  return guarded([&] {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const auto& data = j.at("data");
    if (!data.is_array() || data.size() != rows) throw InputError("matrix \"data\" must have \"rows\" rows");
    Matrix<Scalar> m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (!data[r].is_array() || data[r].size() != cols) throw InputError("matrix row length must equal \"cols\"");
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = scalar_from_json(data[r][c]);
    }
    return m;
  });
}

// --- protocols and verdicts ------------------------------------------------

/// Exact unscaled operators plus the float scale factors (1 / largest singular value).
inline json protocol_to_json(const SloccProtocol& p) {
  return json{{"A", matrix_to_json(p.exact_ops.A)},
              {"B", matrix_to_json(p.exact_ops.B)},
              {"C", matrix_to_json(p.exact_ops.C)},
              {"scale", json::array({1.0 / p.norms[0], 1.0 / p.norms[1], 1.0 / p.norms[2]})},
              {"source_dim", p.source_dim},
              {"success_probability", p.success_probability}};
}

inline json verdict_to_json(const ConvertVerdict& v) {
  json out{{"verdict", to_string(v.kind)},
           {"witness", v.witness ? decomposition_to_json(*v.witness) : json(nullptr)},
           {"lower_bound", v.lower_bound},
           {"upper_bound", v.upper_bound ? json(*v.upper_bound) : json(nullptr)},
           {"reason", v.reason}};
  return out;
}

// --- files -----------------------------------------------------------------

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << j.dump(1) << '\n';
}

}  // namespace tenrank::io
