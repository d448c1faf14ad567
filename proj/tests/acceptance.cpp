// Acceptance suite: one PASS/FAIL line per criterion, each with its own time bound.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "tenrank/tenrank.hpp"

using namespace tenrank;

namespace {

constexpr double kDeviationTol = 1e-10;
constexpr double kAlsTol = 1e-8;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double bound_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = elapsed < bound_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("criterion %d %-28s %s  (%s; %.2f s, bound %.0f s%s)\n", id, name, pass ? "PASS" : "FAIL",
              o.detail.c_str(), elapsed, bound_s, in_time ? "" : ", TIME EXCEEDED");
  std::fflush(stdout);
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

double simulated_deviation(const ExactDecomposition& d, std::size_t levels, const ExactTensor& target,
                           double* probability) {
  const SloccProtocol p = build_protocol(d, levels);
  const SimulationResult sim = levels <= 64 ? simulate(p, to_float(ghz_state(levels))) : simulate_ghz(p);
  *probability = sim.probability;
  return relative_deviation(sim.outcome, to_float(target));
}

Outcome strassen_verification() {
  const bool mm = verify_decomposition(matmul_tensor(2, 2, 2), strassen7()).match;
  const auto carried = transport(phi3_matmul_witness(), strassen7());
  const bool phi = verify_decomposition(phi3_state(), carried).match;
  return {mm && phi && carried.size() == 7,
          "MATMUL(2,2,2) match " + yesno(mm) + ", PHI3 match " + yesno(phi) + ", " + std::to_string(carried.size()) +
              " terms"};
}

Outcome non_additivity() {
  const bool w2 = verify_decomposition(w2_state(), fiduccia8_w2()).match;
  const bool cls = classify_three_qubit(w_state()) == ThreeQubitClass::W;
  const bool pencil = rank_leq2_test_2x2x2(w_state()).verdict == PencilVerdict::RankGeq3;
  const bool upper = verify_decomposition(w_state(), w3_decomposition()).match && w3_decomposition().size() == 3;
  const std::size_t terms = fiduccia8_w2().size();
  return {w2 && cls && pencil && upper && terms < 9,
          "W(x)W 8-term match " + yesno(w2) + ", rk(W)=3 certified " + yesno(cls && pencil && upper) + ", " +
              std::to_string(terms) + " < 3^2 = 9"};
}

Outcome theorem_b() {
  double prob = 0;
  const double dev = simulated_deviation(fiduccia8_w2(), 8, w2_state(), &prob);
  std::ostringstream os;
  os << "deviation " << dev << ", probability " << prob;
  return {dev <= kDeviationTol && prob > 0.0, os.str()};
}

Outcome theorem_c() {
  std::ostringstream os;
  bool ok = true;
  double prob1 = 0, prob2 = 0;
  const auto w1 = strassen7_phi3();
  const double dev1 = simulated_deviation(w1, 8, phi3_state(), &prob1);
  ok = ok && w1.size() <= 8 && dev1 <= kDeviationTol && prob1 > 0;
  const auto w2 = decomposition_power(w1, 2).materialize();
  const auto phi2 = tensor_power(phi3_state(), 2);
  ok = ok && verify_decomposition(phi2, w2).match;
  const double dev2 = simulated_deviation(w2, 64, phi2, &prob2);
  ok = ok && w2.size() <= 64 && dev2 <= kDeviationTol && prob2 > 0;
  os << "n=1 dev " << dev1 << ", n=2 dev " << dev2;

  const PowerDecomposition w6(w1, 6);
  const auto res = verify_randomized(TensorPower(phi3_state(), 6), w6, kDefaultProbeCount, 0);
  const bool fits = w6.size() <= (std::size_t{1} << 17);
  ok = ok && res.match && res.probes == 20 && w6.size() == 117649 && fits;
  os << ", n=6 " << w6.size() << " terms randomized match " << yesno(res.match) << " over " << res.probes
     << " probes, 117649 <= 131072 " << yesno(fits);
  return {ok, os.str()};
}

Outcome fast_matmul() {
  RationalSampler rng(5);
  bool ok = true;
  std::size_t expected = 1;
  std::ostringstream os;
  for (std::size_t n = 1; n <= 6; ++n) {
    expected *= 7;
    const std::size_t s = std::size_t{1} << n;
    for (int pair = 0; pair < 5; ++pair) {
      const auto x = random_matrix(s, s, rng), y = random_matrix(s, s, rng);
      const auto [z, count] = strassen_multiply(x, y, 1);
      ok = ok && oracle::equals(z, oracle::naive_matmul(x, y)) && count.nonscalar_mults == expected;
    }
  }
  os << "n=1..6, 5 pairs each, counts 7^n " << yesno(ok);
  return {ok, os.str()};
}

Outcome monotonicity() {
  RationalSampler rng(6);
  int bad_verify = 0, bad_count = 0, bad_rank = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Dims d{1 + static_cast<std::size_t>(trial % 3), 2 + static_cast<std::size_t>(trial % 2), 2};
    const auto dec = oracle::random_decomposition(d, 1 + trial % 4, rng);
    const auto t = reconstruct(dec);
    auto op = [&rng](std::size_t out, std::size_t in) {
      Matrix<Scalar> m(out, in);
      for (std::size_t i = 0; i < out; ++i)
        for (std::size_t j = 0; j < in; ++j) m(i, j) = rng.nonzero_real();
      return m;
    };
    const LocalOperatorTriple<Scalar> ops{op(d.a + trial % 2, d.a), op(d.b, d.b), op(2 + trial % 2, d.c)};
    const auto moved = apply_local_operators(ops, t);
    const auto carried = transport(ops, dec);
    if (!verify_decomposition(moved, carried).match) ++bad_verify;
    if (carried.size() != dec.size()) ++bad_count;
    const auto before = flattening_ranks(t), after = flattening_ranks(moved);
    for (int leg = 0; leg < 3; ++leg)
      if (after[leg] > before[leg]) ++bad_rank;
  }
  std::ostringstream os;
  os << "200 cases: verify failures " << bad_verify << ", term-count changes " << bad_count << ", rank increases "
     << bad_rank;
  return {bad_verify == 0 && bad_count == 0 && bad_rank == 0, os.str()};
}

Outcome classifier() {
  const std::pair<ExactTensor, ThreeQubitClass> reps[] = {
      {ghz_state(2), ThreeQubitClass::GHZ},
      {w_state(), ThreeQubitClass::W},
      {make_tensor(Dims{2, 2, 2}, {{{0, 0, 0}, Scalar(1)}, {{0, 1, 1}, Scalar(1)}}), ThreeQubitClass::Bisep_A_BC},
      {make_tensor(Dims{2, 2, 2}, {{{0, 0, 0}, Scalar(1)}, {{1, 0, 1}, Scalar(1)}}), ThreeQubitClass::Bisep_B_AC},
      {make_tensor(Dims{2, 2, 2}, {{{0, 0, 0}, Scalar(1)}, {{1, 1, 0}, Scalar(1)}}), ThreeQubitClass::Bisep_C_AB},
      {product_state(), ThreeQubitClass::Product}};
  RationalSampler rng(7);
  int wrong_rep = 0, changed = 0;
  for (const auto& [state, label] : reps) {
    if (classify_three_qubit(state) != label) ++wrong_rep;
    for (int trial = 0; trial < 200; ++trial) {
      const LocalOperatorTriple<Scalar> ops{random_invertible(2, rng, trial % 2 == 0), random_invertible(2, rng),
                                            random_invertible(2, rng, trial % 3 == 0)};
      if (classify_three_qubit(apply_local_operators(ops, state)) != label) ++changed;
    }
  }
  std::ostringstream os;
  os << "6 representatives, wrong labels " << wrong_rep << ", 1200 transforms, label changes " << changed;
  return {wrong_rep == 0 && changed == 0, os.str()};
}

Outcome als_behavior() {
  const AlsConfig cfg;
  const AlsResult r3 = als_search(to_float(w_state()), 3, cfg);
  const AlsResult r2 = als_search(to_float(w_state()), 2, cfg);
  std::ostringstream os;
  os << "W r=3 found " << yesno(r3.found) << " residual " << r3.residual << "; W r=2 found " << yesno(r2.found)
     << " residual " << r2.residual << " max column norm " << r2.max_column_norm << " border_flag "
     << yesno(r2.border_flag);
  return {r3.found && r3.residual <= kAlsTol && !r2.found && r2.border_flag, os.str()};
}

Outcome bipartite() {
  RationalSampler rng(9);
  auto of_rank = [&rng](std::size_t rows, std::size_t cols, std::size_t r) {
    for (;;) {
      const auto m = random_matrix(rows, r, rng) * random_matrix(r, cols, rng);
      if (oracle::gauss_rank([&] {
            oracle::QMat q(rows, std::vector<mpq_class>(cols));
            for (std::size_t i = 0; i < rows; ++i)
              for (std::size_t j = 0; j < cols; ++j) q[i][j] = m(i, j).real();
            return q;
          }()) != r)
        continue;
      ExactTensor t(Dims{rows, cols, 1});
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) t(i, j, 0) = m(i, j);
      return t;
    }
  };
  int wrong = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rs = 1 + trial % 5, rt = 1 + (trial / 5) % 5;
    const auto s = of_rank(5, 6, rs), t = of_rank(6, 5, rt);
    if (bipartite_convertible(s, t) != (rs >= rt)) ++wrong;
  }
  return {wrong == 0, "100 pairs, wrong decisions " + std::to_string(wrong)};
}

}  // namespace

int main() {
  criterion(1, "strassen-verification", 1, strassen_verification);
  criterion(2, "non-additivity", 1, non_additivity);
  criterion(3, "ghz3-to-w2-protocol", 1, theorem_b);
  criterion(4, "ghz-to-phi3-desk-scale", 60, theorem_c);
  criterion(5, "fast-matmul-vs-naive", 120, fast_matmul);
  criterion(6, "monotonicity", 30, monotonicity);
  criterion(7, "classifier", 30, classifier);
  criterion(8, "als-behavior", 60, als_behavior);
  criterion(9, "bipartite-criterion", 5, bipartite);
  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
