#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tenrank/states.hpp"
#include "tenrank/tensor.hpp"

namespace tenrank {

/// True when x = lambda * y for some nonzero scalar lambda.
inline bool proportional(const ExactTensor& x, const ExactTensor& y) {
  if (!(x.dims() == y.dims())) return false;
  std::optional<Scalar> ratio;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Scalar& a = x.entries()[i];
    const Scalar& b = y.entries()[i];
    if (a.is_zero() != b.is_zero()) return false;
    if (a.is_zero()) continue;
    Scalar r = a / b;
    if (!ratio) ratio = r;
    else if (*ratio != r) return false;
  }
  return ratio.has_value();
}

struct RankFact {
  std::string name;
  std::size_t rank = 0;
  std::string note;
};

/// Exact ranks that exceed what flattenings can certify, keyed by state up to
/// a nonzero scalar. Read-only once built.
class RankFacts {
 public:
  using Matcher = std::function<std::optional<RankFact>(const ExactTensor&)>;

  void add(std::string name, ExactTensor state, std::size_t rank, std::string note) {
    matchers_.push_back([name = std::move(name), state = std::move(state), rank,
                         note = std::move(note)](const ExactTensor& t) -> std::optional<RankFact> {
      if (proportional(t, state)) return RankFact{name, rank, note};
      return std::nullopt;
    });
  }
  void add(Matcher m) { matchers_.push_back(std::move(m)); }

  std::optional<RankFact> lookup(const ExactTensor& t) const {
    for (const auto& m : matchers_)
      if (auto f = m(t)) return f;
    return std::nullopt;
  }

  static const RankFacts& defaults() {
    static const RankFacts facts = [] {
      RankFacts f;
      f.add("PHI3", phi3_state(), 7, "Strassen upper bound + Winograd optimality, consumed as fact");
      f.add("W", w_state(), 3, "W-class");
      f.add([](const ExactTensor& t) -> std::optional<RankFact> {
        const Dims d = t.dims();
        if (d.a != d.b || d.b != d.c) return std::nullopt;
        if (!proportional(t, ghz_state(d.a))) return std::nullopt;
        return RankFact{"GHZ(" + std::to_string(d.a) + ")", d.a, "diagonal"};
      });
      return f;
    }();
    return facts;
  }

 private:
  std::vector<Matcher> matchers_;
};

}  // namespace tenrank
