#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"

using namespace tenrank;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("tenrank_cli_" + name)).string();
}

}  // namespace

TEST(CliState, Examples) {
  EXPECT_EQ(run({"state", "PHI3"}).out, "dims [4,4,4] nonzeros 8\n");
  EXPECT_EQ(run({"state", "GHZ", "--n", "3"}).out, "dims [8,8,8] nonzeros 8\n");
  EXPECT_EQ(run({"state", "W2"}).out, "dims [4,4,4] nonzeros 9\n");
  EXPECT_EQ(run({"state", "MATMUL(2,3,4)"}).out, "dims [6,12,8] nonzeros 24\n");
  EXPECT_EQ(run({"state", "ghz(5)"}).out, "dims [5,5,5] nonzeros 5\n");
  auto j = json::parse(run({"--json", "state", "W"}).out);
  EXPECT_EQ(j.at("nonzeros"), 3);
}

TEST(CliState, WritesAndReadsFiles) {
  const auto path = temp_path("w2.json");
  ASSERT_EQ(run({"state", "W2", "--out", path}).code, 0);
  EXPECT_EQ(io::tensor_from_json(io::read_json_file(path)), w2_state());
  EXPECT_EQ(run({"state", path}).out, "dims [4,4,4] nonzeros 9\n");
  auto j = json::parse(run({"state", "EPR", "--out", "-"}).out);
  EXPECT_EQ(io::tensor_from_json(j), epr_state());
  std::filesystem::remove(path);
}

TEST(CliState, Errors) {
  EXPECT_EQ(run({"state", "NOPE"}).code, 2);
  EXPECT_EQ(run({"state", "GHZ(0)"}).code, 2);
  EXPECT_EQ(run({"state"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  const auto bad = temp_path("bad.json");
  { std::ofstream(bad) << "{\"dims\":[2,2,2],\"entries\":[{\"i\":[0,0,0],\"re\":\"1/0\"}]}"; }
  EXPECT_EQ(run({"state", bad}).code, 2);
  { std::ofstream(bad) << "not json"; }
  EXPECT_EQ(run({"state", bad}).code, 2);
  std::filesystem::remove(bad);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliRank, Examples) {
  auto phi = run({"rank", "PHI3", "--witness", "strassen7-phi3.json"});
  EXPECT_EQ(phi.code, 0);
  EXPECT_NE(phi.out.find("upper=7 lower=7 rank=7"), std::string::npos);
  auto ghz = run({"rank", "GHZ"});
  EXPECT_NE(ghz.out.find("upper=2 lower=2"), std::string::npos);
  auto w = run({"rank", "W", "--als", "2"});
  EXPECT_EQ(w.code, 0);
  EXPECT_NE(w.out.find("NotFound"), std::string::npos);
  auto j = json::parse(run({"--json", "rank", "W", "--als", "3"}).out);
  EXPECT_TRUE(j.at("als").at("found").get<bool>());
  EXPECT_EQ(j.at("rank"), 3);
}

TEST(CliRank, WitnessMismatchExitsThree) {
  EXPECT_EQ(run({"rank", "W2", "--witness", "strassen7.json"}).code, 3);
  EXPECT_EQ(run({"rank", "W", "--witness", "FIDUCCIA8_W2"}).code, 3);
  EXPECT_EQ(run({"rank", "W", "--witness", "missing.json"}).code, 2);
}

TEST(CliRank, TamperedWitnessFileIsRejected) {
  auto j = io::read_json_file(TENRANK_WITNESS_DIR "/strassen7-phi3.json");
  j["terms"][0]["a"][0] = "2/1";
  const auto path = temp_path("tampered.json");
  io::write_json_file(path, j);
  EXPECT_EQ(run({"rank", "PHI3", "--witness", path}).code, 3);
  std::filesystem::remove(path);
}

TEST(CliVerify, BuiltinExportMatchesShippedFiles) {
  const std::pair<const char*, const char*> files[] = {{"STRASSEN7", "strassen7.json"},
                                                       {"STRASSEN7_PHI3", "strassen7-phi3.json"},
                                                       {"FIDUCCIA8_W2", "fiduccia8.json"},
                                                       {"GHZ", "ghz2.json"},
                                                       {"W3", "w3.json"}};
  for (const auto& [name, file] : files) {
    auto exported = json::parse(run({"verify", "--builtin", name}).out);
    EXPECT_EQ(exported, io::read_json_file(std::string(TENRANK_WITNESS_DIR) + "/" + file)) << name;
  }
}

TEST(CliVerify, CheckAndPower) {
  EXPECT_EQ(run({"verify", "MATMUL", "strassen7.json"}).out, "7 terms, exact match\n");
  auto bad = run({"verify", "PHI3", "STRASSEN7"});
  EXPECT_EQ(bad.code, 3);
  EXPECT_NE(bad.out.find("MISMATCH"), std::string::npos);
  auto sq = json::parse(run({"--json", "verify", "PHI3", "strassen7-phi3.json", "--power", "2"}).out);
  EXPECT_TRUE(sq.at("match").get<bool>());
  EXPECT_EQ(sq.at("terms"), 49);
  EXPECT_EQ(run({"verify", "PHI3"}).code, 2);
}

TEST(CliConvert, Examples) {
  const auto path = temp_path("protocol.json");
  auto yes = run({"--json", "convert", "W2", "--ghz", "8", "--witness", "fiduccia8.json", "--simulate", "--out", path});
  EXPECT_EQ(yes.code, 0);
  auto j = json::parse(yes.out);
  EXPECT_EQ(j.at("verdict"), "yes");
  EXPECT_GE(j.at("simulation").at("fidelity").get<double>(), 1.0 - 1e-10);
  EXPECT_GT(j.at("simulation").at("probability").get<double>(), 0.0);
  auto protocol = io::read_json_file(path);
  EXPECT_EQ(protocol.at("source_dim"), 8);
  std::filesystem::remove(path);

  auto no = run({"convert", "PHI3", "--ghz", "4"});
  EXPECT_EQ(no.code, 4);
  EXPECT_EQ(json::parse(no.out.substr(0, no.out.find('\n'))).at("verdict"), "no");

  auto phi7 = run({"convert", "PHI3", "--ghz", "7", "--witness", "strassen7-phi3.json", "--simulate", "--out", path});
  EXPECT_EQ(phi7.code, 0);
  EXPECT_NE(phi7.out.find("fidelity="), std::string::npos);
  std::filesystem::remove(path);

  EXPECT_EQ(run({"convert", "W2", "--ghz", "5", "--no-search"}).code, 5);
  EXPECT_EQ(run({"convert", "W2", "--ghz", "8", "--witness", "strassen7.json"}).code, 3);
  EXPECT_EQ(run({"convert", "W2"}).code, 2);
}

TEST(CliClassify, Examples) {
  EXPECT_NE(run({"classify", "W"}).out.find("class W\n"), std::string::npos);
  auto j = json::parse(run({"--json", "classify", "GHZ"}).out);
  EXPECT_EQ(j.at("class"), "GHZ");
  EXPECT_EQ(run({"classify", "PHI3"}).code, 2);
}

TEST(CliMatmul, Examples) {
  EXPECT_NE(run({"matmul", "--n", "6", "--cutoff", "1"}).out.find("nonscalar_mults=117649"), std::string::npos);
  EXPECT_NE(run({"matmul", "--n", "0"}).out.find("nonscalar_mults=1 "), std::string::npos);
  auto check = run({"matmul", "--n", "3", "--check"});
  EXPECT_EQ(check.code, 0);
  EXPECT_NE(check.out.find("exact match vs naive"), std::string::npos);
  EXPECT_EQ(run({"matmul", "--n", "11", "--check"}).code, 2);
}

TEST(CliMatmul, BenchLines) {
  auto bench = run({"matmul", "--n", "4", "--cutoff", "2", "--bench", "--reps", "3"});
  std::istringstream lines(bench.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    auto j = json::parse(line);
    for (const char* key : {"n", "cutoff", "nonscalar_mults", "additions", "wall_ns"}) EXPECT_TRUE(j.contains(key));
    EXPECT_EQ(j.at("nonscalar_mults"), 343 * 8);
    ++count;
  }
  EXPECT_EQ(count, 3);
}

TEST(CliMatmul, DeterministicForSeed) {
  auto a = run({"--seed", "5", "--json", "matmul", "--n", "2", "--check"});
  auto b = run({"--seed", "5", "--json", "matmul", "--n", "2", "--check"});
  EXPECT_EQ(a.out, b.out);
}

TEST(CliDemo, FastDemos) {
  auto na = run({"demo", "nonadditivity"});
  EXPECT_EQ(na.code, 0);
  EXPECT_NE(na.out.find("rk(W)=3, rk(W(x)W)<=8<9: PASS"), std::string::npos);
  auto w2 = json::parse(run({"--json", "demo", "ghz3-to-w2"}).out);
  EXPECT_TRUE(w2.at("pass").get<bool>());
  EXPECT_EQ(run({"demo", "nope"}).code, 2);
}
