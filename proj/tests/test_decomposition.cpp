#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tenrank/tenrank.hpp"

using namespace tenrank;

TEST(Decomposition, RejectsMalformedTerms) {
  using V = std::vector<Scalar>;
  EXPECT_THROW(ExactDecomposition(Dims{2, 2, 2}, {{V{Scalar(1)}, V{Scalar(1), Scalar(0)}, V{Scalar(1), Scalar(0)}}}),
               InputError);
  EXPECT_THROW(ExactDecomposition(Dims{2, 2, 2}, {{V{Scalar(0), Scalar(0)}, V{Scalar(1), Scalar(0)}, V{Scalar(1), Scalar(0)}}}),
               InputError);
}

TEST(Decomposition, ReconstructMatchesExpansionOracle) {
  RationalSampler rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    auto d = oracle::random_decomposition(Dims{2, 3, 2}, 1 + trial % 4, rng);
    EXPECT_EQ(reconstruct(d), oracle::expand_terms(d.dims(), d.terms()));
  }
}

TEST(Verify, BuiltinWitnesses) {
  EXPECT_TRUE(verify_decomposition(matmul_tensor(2, 2, 2), strassen7()).match);
  EXPECT_EQ(strassen7().size(), 7u);
  EXPECT_TRUE(verify_decomposition(w2_state(), fiduccia8_w2()).match);
  EXPECT_EQ(fiduccia8_w2().size(), 8u);
  EXPECT_TRUE(verify_decomposition(ghz_state(2), ghz_decomposition(2)).match);
  EXPECT_TRUE(verify_decomposition(w_state(), w3_decomposition()).match);
  auto g4 = ghz_decomposition(4);
  EXPECT_EQ(g4.size(), 4u);
  EXPECT_TRUE(verify_decomposition(ghz_state(4), g4).match);
}

TEST(Verify, ReportsFirstMismatchAndDimsError) {
  auto res = verify_decomposition(w_state(), ghz_decomposition(2));
  EXPECT_FALSE(res.match);
  ASSERT_TRUE(res.first_mismatch);
  EXPECT_EQ(*res.first_mismatch, (Index3{0, 0, 0}));
  EXPECT_THROW(verify_decomposition(w_state(), strassen7()), InputError);
}

TEST(Verify, TermCountDominatesFlatteningRanks) {
  const std::pair<ExactTensor, ExactDecomposition> pairs[] = {
      {matmul_tensor(2, 2, 2), strassen7()}, {phi3_state(), strassen7_phi3()},   {w2_state(), fiduccia8_w2()},
      {ghz_state(2), ghz_decomposition(2)},  {ghz_state(4), ghz_decomposition(4)}, {w_state(), w3_decomposition()}};
  for (const auto& [t, d] : pairs) {
    ASSERT_TRUE(verify_decomposition(t, d).match);
    EXPECT_GE(d.size(), max_flattening_rank(t));
  }
}

TEST(BuiltinState, Examples) {
  EXPECT_EQ(builtin_state({"GHZ"}), ghz_state(2));
  auto phi = builtin_state({"PHI3"});
  EXPECT_EQ(phi.dims(), (Dims{4, 4, 4}));
  EXPECT_EQ(phi.nonzero_count(), 8u);
  EXPECT_EQ(phi(0, 0, 0), Scalar(1));
  // (|00>_A|00>_B + |10>_A|10>_B)|00>_C: second term at A=2, B=2, C=0.
  EXPECT_EQ(phi(2, 2, 0), Scalar(1));
  auto mm = builtin_state({"MATMUL", 1, 1, 1});
  EXPECT_EQ(mm.nonzero_count(), 1u);
  EXPECT_EQ(mm(0, 0, 0), Scalar(1));
  EXPECT_EQ(builtin_state({"W2"}), tensor_product(w_state(), w_state()));
  EXPECT_THROW(builtin_state({"NOPE"}), InputError);
}

TEST(BuiltinState, Phi3IsTriangleOfEprPairs) {
  // |Phi>_AB |Phi>_AC |Phi>_BC with A=(x,y), B=(x,z), C=(y,z).
  ExactTensor ref(Dims{4, 4, 4});
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t z = 0; z < 2; ++z) ref(2 * x + y, 2 * x + z, 2 * y + z) = Scalar(1);
  EXPECT_EQ(phi3_state(), ref);
}

TEST(Transport, MonotoneUnderLocalOperators) {
  RationalSampler rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const Dims d{2, 3, 2};
    auto dec = oracle::random_decomposition(d, 1 + trial % 3, rng);
    auto t = reconstruct(dec);
    LocalOperatorTriple<Scalar> ops{random_matrix(1 + trial % 3, 2, rng), random_matrix(2, 3, rng),
                                    random_matrix(3, 2, rng)};
    auto moved = apply_local_operators(ops, t);
    auto carried = transport(ops, dec);
    EXPECT_TRUE(verify_decomposition(moved, carried).match);
    EXPECT_LE(carried.size(), dec.size());
    EXPECT_LE(max_flattening_rank(moved), max_flattening_rank(t));
  }
}

TEST(SliceWitness, ReconstructsTarget) {
  RationalSampler rng(53);
  for (int trial = 0; trial < 15; ++trial) {
    auto t = oracle::random_tensor(Dims{2, 3, 3}, rng);
    auto w = slice_witness(t);
    EXPECT_TRUE(verify_decomposition(t, w).match);
    EXPECT_LE(w.size(), 2u * 3u);
  }
  EXPECT_EQ(slice_witness(ghz_state(3)).size(), 3u);
}

TEST(DecompositionPower, GhzCubeIsGhz8) {
  auto p = decomposition_power(ghz_decomposition(2), 3);
  EXPECT_EQ(p.size(), 8u);
  auto dense = p.materialize();
  EXPECT_EQ(dense.size(), 8u);
  EXPECT_TRUE(verify_decomposition(ghz_state(8), dense).match);
}

TEST(DecompositionPower, StrassenSquaredVerifiesDensely) {
  auto p = decomposition_power(strassen7(), 2);
  EXPECT_EQ(p.size(), 49u);
  auto res = verify_decomposition(TensorPower(matmul_tensor(2, 2, 2), 2), p);
  EXPECT_TRUE(res.match);
  EXPECT_FALSE(res.randomized);
  EXPECT_EQ(res.terms, 49u);
  EXPECT_TRUE(verify_decomposition(tensor_power(matmul_tensor(2, 2, 2), 2), p.materialize()).match);
}

TEST(DecompositionPower, LazyContractionMatchesMaterialized) {
  RationalSampler rng(59);
  auto base = oracle::random_decomposition(Dims{2, 2, 3}, 2, rng);
  auto p = decomposition_power(base, 3);
  auto dense = p.materialize();
  TensorPower tp(reconstruct(base), 3);
  auto dense_t = tp.materialize();
  for (int probe = 0; probe < 5; ++probe) {
    std::vector<Scalar> x(8), y(8), z(27);
    for (auto& s : x) s = rng.real();
    for (auto& s : y) s = rng.real();
    for (auto& s : z) s = rng.real();
    const Scalar expected = contract(dense_t, x, y, z);
    EXPECT_EQ(p.contract(x, y, z), expected);
    EXPECT_EQ(contract(dense, x, y, z), expected);
    EXPECT_EQ(tp.contract(x, y, z), expected);
  }
}

TEST(DecompositionPower, RandomizedCheckDetectsCorruption) {
  auto d = strassen7();
  auto target = matmul_tensor(2, 2, 2);
  EXPECT_TRUE(verify_randomized(target, d, 20, 0).match);
  auto bad = target;
  bad(1, 2, 3) = Scalar(5);
  EXPECT_FALSE(verify_randomized(bad, d, 20, 0).match);
  EXPECT_FALSE(verify_randomized(TensorPower(bad, 2), decomposition_power(d, 2), 20, 0).match);
}

TEST(DecompositionPower, CapExceededIsResourceError) {
  EXPECT_THROW(decomposition_power(strassen7(), 8), ResourceError);
  EXPECT_THROW(decomposition_power(strassen7(), 3, 300), ResourceError);
  EXPECT_NO_THROW(decomposition_power(strassen7(), 3, 343));
  EXPECT_THROW(decomposition_power(strassen7(), 0), InputError);
}

TEST(DecompositionPower, NonAdditivityCount) {
  EXPECT_EQ(decomposition_power(w3_decomposition(), 2).size(), 9u);
  EXPECT_LT(fiduccia8_w2().size(), 9u);
}

TEST(Als, FindsWRankThree) {
  auto res = als_search(to_float(w_state()), 3);
  EXPECT_TRUE(res.found);
  EXPECT_LE(res.residual, 1e-8);
}

TEST(Als, FindsGhzRankTwo) {
  auto res = als_search(to_float(ghz_state(2)), 2);
  EXPECT_TRUE(res.found);
  EXPECT_LE(res.residual, 1e-10);
}

TEST(Als, WRankTwoIsNotFound) {
  AlsConfig cfg;
  cfg.restarts = 4;
  auto res = als_search(to_float(w_state()), 2, cfg);
  EXPECT_FALSE(res.found);
  EXPECT_GT(res.residual, 1e-8);
}

TEST(Als, DeterministicForSeed) {
  AlsConfig cfg;
  cfg.restarts = 3;
  cfg.seed = 7;
  auto a = als_search(to_float(w_state()), 3, cfg);
  auto b = als_search(to_float(w_state()), 3, cfg);
  EXPECT_EQ(a.residual, b.residual);
  EXPECT_EQ(a.restart, b.restart);
}

TEST(Als, InvalidConfig) {
  AlsConfig cfg;
  cfg.restarts = 0;
  EXPECT_THROW(als_search(to_float(w_state()), 2, cfg), InputError);
  EXPECT_THROW(als_search(to_float(w_state()), 0), InputError);
  AlsConfig neg;
  neg.tol = -1;
  EXPECT_THROW(als_search(to_float(w_state()), 2, neg), InputError);
}

TEST(Als, RationalizePromotesGhz) {
  auto res = als_search(to_float(ghz_state(2)), 2);
  ASSERT_TRUE(res.found);
  auto exact = rationalize(res.decomposition, ghz_state(2));
  ASSERT_TRUE(exact);
  EXPECT_TRUE(verify_decomposition(ghz_state(2), *exact).match);
}

TEST(Pencil, Examples) {
  EXPECT_EQ(rank_leq2_test_2x2x2(ghz_state(2)).verdict, PencilVerdict::RankLeq2);
  EXPECT_EQ(rank_leq2_test_2x2x2(w_state()).verdict, PencilVerdict::RankGeq3);
  auto p = rank_leq2_test_2x2x2(product_state());
  EXPECT_EQ(p.verdict, PencilVerdict::Degenerate);
  EXPECT_EQ(p.rank, 1u);
  EXPECT_THROW(rank_leq2_test_2x2x2(phi3_state()), InputError);
}

TEST(Pencil, AgreesWithRandomTwoTermWitnesses) {
  RationalSampler rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    auto d = oracle::random_decomposition(Dims{2, 2, 2}, 2, rng);
    auto t = reconstruct(d);
    ASSERT_TRUE(verify_decomposition(t, d).match);
    auto res = rank_leq2_test_2x2x2(t);
    EXPECT_NE(res.verdict, PencilVerdict::RankGeq3) << "trial " << trial;
  }
}

TEST(Pencil, InvariantForWOrbit) {
  RationalSampler rng(67);
  for (int trial = 0; trial < 30; ++trial) {
    LocalOperatorTriple<Scalar> ops{random_invertible(2, rng), random_invertible(2, rng, true), random_invertible(2, rng)};
    EXPECT_EQ(rank_leq2_test_2x2x2(apply_local_operators(ops, w_state())).verdict, PencilVerdict::RankGeq3);
    EXPECT_EQ(rank_leq2_test_2x2x2(apply_local_operators(ops, ghz_state(2))).verdict, PencilVerdict::RankLeq2);
  }
}
