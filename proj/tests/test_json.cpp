#include <gtest/gtest.h>

#include <filesystem>

#include "oracles.hpp"
#include "tenrank/json_io.hpp"
#include "tenrank/tenrank.hpp"

using namespace tenrank;
using nlohmann::json;

TEST(JsonIo, MatmulGoldenFile) {
  auto golden = io::read_json_file(TENRANK_GOLDEN_DIR "/matmul_222.json");
  EXPECT_EQ(io::tensor_from_json(golden), matmul_tensor(2, 2, 2));
  EXPECT_EQ(io::tensor_to_json(matmul_tensor(2, 2, 2)), golden);
}

TEST(JsonIo, TensorRoundTrip) {
  RationalSampler rng(149);
  for (int trial = 0; trial < 10; ++trial) {
    ExactTensor t(Dims{2, 3, 2});
    for (auto& x : t.entries()) x = trial % 2 ? rng.complex() : rng.real();
    EXPECT_EQ(io::tensor_from_json(json::parse(io::tensor_to_json(t).dump())), t);
  }
}

TEST(JsonIo, TensorErrors) {
  auto parse = [](const char* text) { return io::tensor_from_json(json::parse(text)); };
  EXPECT_THROW(parse(R"({"dims":[2,2],"entries":[]})"), InputError);
  EXPECT_THROW(parse(R"({"dims":[2,2,0],"entries":[]})"), InputError);
  EXPECT_THROW(parse(R"({"dims":[2,2,2]})"), InputError);
  EXPECT_THROW(parse(R"({"dims":[2,2,2],"entries":[{"i":[0,0,2],"re":"1"}]})"), InputError);
  EXPECT_THROW(parse(R"({"dims":[2,2,2],"entries":[{"i":[0,0,0],"re":"1"},{"i":[0,0,0],"re":"2"}]})"), InputError);
  EXPECT_THROW(parse(R"({"dims":[2,2,2],"entries":[{"i":[0,0,0],"re":"1/0"}]})"), InputError);
  EXPECT_THROW(parse(R"({"dims":[2,2,2],"entries":[{"i":[0,0,0],"re":0.5}]})"), InputError);
  auto ok = parse(R"({"dims":[2,2,2],"entries":[{"i":[1,1,1],"re":"-2/4","im":"3"}]})");
  EXPECT_EQ(ok(1, 1, 1), Scalar(mpq_class(-1, 2), mpq_class(3)));
}

TEST(JsonIo, DecompositionRoundTrip) {
  for (const auto& d : {strassen7(), fiduccia8_w2(), ghz_decomposition(3)})
    EXPECT_EQ(io::decomposition_from_json(json::parse(io::decomposition_to_json(d).dump())), d);
  auto j = io::decomposition_to_json(strassen7());
  EXPECT_TRUE(j.at("exact").get<bool>());
  EXPECT_EQ(j.at("terms").size(), 7u);
  auto complex_dec = ExactDecomposition(
      Dims{1, 1, 1}, {{{Scalar(mpq_class(1), mpq_class(1, 2))}, {Scalar(1)}, {Scalar(mpq_class(0), mpq_class(1))}}});
  EXPECT_EQ(io::decomposition_from_json(io::decomposition_to_json(complex_dec)), complex_dec);
}

TEST(JsonIo, FloatDecompositionIsRejectedAsExact) {
  FloatDecomposition f(Dims{1, 1, 1}, {{{Complex(1, 0)}, {Complex(2, 0)}, {Complex(0, 1)}}});
  auto j = io::decomposition_to_json(f);
  EXPECT_FALSE(j.at("exact").get<bool>());
  EXPECT_DOUBLE_EQ(j["terms"][0]["c"][0]["im"].get<double>(), 1.0);
  EXPECT_THROW(io::decomposition_from_json(j), InputError);
}

TEST(JsonIo, MatrixRoundTripAndErrors) {
  RationalSampler rng(151);
  auto m = random_invertible(3, rng, true);
  EXPECT_EQ(io::matrix_from_json(io::matrix_to_json(m)), m);
  EXPECT_THROW(io::matrix_from_json(json::parse(R"({"rows":2,"cols":2,"data":[["1","2"]]})")), InputError);
  EXPECT_THROW(io::matrix_from_json(json::parse(R"({"rows":1,"cols":2,"data":[["1"]]})")), InputError);
}

TEST(JsonIo, ProtocolAndVerdict) {
  auto p = build_protocol(ghz_decomposition(2), 3);
  auto j = io::protocol_to_json(p);
  EXPECT_EQ(j.at("source_dim").get<std::size_t>(), 3u);
  EXPECT_GT(j.at("success_probability").get<double>(), 0.0);
  EXPECT_EQ(io::matrix_from_json(j.at("A")), p.exact_ops.A);
  auto v = io::verdict_to_json(decide_ghz_conversion(phi3_state(), 4));
  EXPECT_EQ(v.at("verdict"), "no");
  EXPECT_EQ(v.at("lower_bound"), 7);
  EXPECT_TRUE(v.at("witness").is_null());
}

TEST(JsonIo, Files) {
  const auto path = std::filesystem::temp_directory_path() / "tenrank_json_io_test.json";
  io::write_json_file(path.string(), io::tensor_to_json(w_state()));
  EXPECT_EQ(io::tensor_from_json(io::read_json_file(path.string())), w_state());
  std::filesystem::remove(path);
  EXPECT_THROW(io::read_json_file("/nonexistent/file.json"), InputError);
}
