#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hapcombine/driver.hpp"
#include "json.hpp"
#include "test_support.hpp"

namespace hapcombine {
namespace {

namespace fs = std::filesystem;
using cli::Command;
using cli::RunConfig;

class DriverTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hapcombine_driver_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = (dir_ / name).string();
    std::ofstream(path) << text;
    return path;
  }

  static std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  int run(const RunConfig& cfg) {
    out_.str("");
    err_.str("");
    return cli::run(cfg, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(DriverTest, CombinesFixtureAcrossThreeFiles) {
  RunConfig cfg;
  cfg.inputs = {write("a.hap", ">ind1\n0000\n1111\n"), write("b.hap", ">ind1\n0011\n1100\n"),
                write("c.hap", ">ind1\n0101\n1010\n")};
  cfg.out_dir = (dir_ / "out").string();
  ASSERT_EQ(run(cfg), cli::exit_code::ok) << err_.str();
  EXPECT_EQ(slurp(dir_ / "out" / "consensus.hap"), ">ind1\n0011\n1100\n");
  const auto rec = nlohmann::ordered_json::parse(slurp(dir_ / "out" / "report.jsonl"));
  EXPECT_EQ(rec["id"], "ind1");
  EXPECT_EQ(rec["score"], 3);
  EXPECT_EQ(rec["tie_count"], 1);
  EXPECT_EQ(rec["distance"], "switch");
  EXPECT_EQ(rec["disagreement"], 6);
  EXPECT_EQ(rec["certificate"], "ExactByConstruction");
  EXPECT_FALSE(rec.contains("switch_error"));

  // Fixed key order.
  std::vector<std::string> keys;
  for (auto it = rec.begin(); it != rec.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"id", "mode", "distance", "k", "score", "tie_count",
                                            "certificate", "solver", "disagreement"}));
}

TEST_F(DriverTest, TruthAddsSwitchError) {
  RunConfig cfg;
  cfg.inputs = {write("a.hap", ">ind1\n0000\n1111\n"), write("b.hap", ">ind1\n0011\n1100\n"),
                write("c.hap", ">ind1\n0101\n1010\n")};
  cfg.truth = write("t.hap", ">ind1\n0000\n1111\n");
  cfg.distance = DistanceSpec::k_hamming(3);
  cfg.out_dir = (dir_ / "out").string();
  ASSERT_EQ(run(cfg), 0) << err_.str();
  const auto rec = nlohmann::json::parse(slurp(dir_ / "out" / "report.jsonl"));
  EXPECT_EQ(rec["k"], 3);
  EXPECT_EQ(rec["score"], 8);
  EXPECT_EQ(rec["switch_error"], 0);
}

TEST_F(DriverTest, EvaluateAgainstItselfIsZero) {
  RunConfig cfg;
  cfg.command = Command::Evaluate;
  cfg.pred = write("p.hap", ">a\n0011\n1100\n>b\n01\n10\n");
  cfg.truth = cfg.pred;
  ASSERT_EQ(run(cfg), 0) << err_.str();
  std::string last, line;
  std::istringstream lines(out_.str());
  while (std::getline(lines, line)) last = line;
  const auto total = nlohmann::json::parse(last);
  EXPECT_EQ(total["total_switch_error"], 0);
  EXPECT_EQ(total["individuals"], 2);
}

TEST_F(DriverTest, SimulateIsDeterministic) {
  RunConfig cfg;
  cfg.command = Command::Simulate;
  cfg.individuals = 25;
  cfg.sim.seed = 7;
  cfg.out_dir = (dir_ / "s1").string();
  ASSERT_EQ(run(cfg), 0);
  cfg.out_dir = (dir_ / "s2").string();
  ASSERT_EQ(run(cfg), 0);
  for (const char* f : {"truth.hap", "genotypes.txt", "method_1.hap", "method_5.hap"}) {
    const auto a = slurp(dir_ / "s1" / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, slurp(dir_ / "s2" / f)) << f;
  }
}

TEST_F(DriverTest, ThreadCountDoesNotChangeOutput) {
  RunConfig sim;
  sim.command = Command::Simulate;
  sim.individuals = 60;
  sim.sim.m = 40;
  sim.sim.l = 4;
  sim.noise = NoiseSpec::switches(0.3);
  sim.out_dir = (dir_ / "sim").string();
  ASSERT_EQ(run(sim), 0);

  RunConfig cfg;
  for (int j = 1; j <= 4; ++j) cfg.inputs.push_back((dir_ / "sim" / ("method_" + std::to_string(j) + ".hap")).string());
  cfg.genotypes = (dir_ / "sim" / "genotypes.txt").string();
  cfg.ties = TiePolicy::random(5);
  cfg.distance = DistanceSpec::hamming();
  std::string reference;
  for (std::size_t threads : {1, 4, 8}) {
    cfg.threads = threads;
    cfg.out_dir = (dir_ / ("t" + std::to_string(threads))).string();
    ASSERT_EQ(run(cfg), 0) << err_.str();
    const std::string both = slurp(fs::path(cfg.out_dir) / "report.jsonl") +
                             slurp(fs::path(cfg.out_dir) / "consensus.hap");
    if (reference.empty()) reference = both;
    EXPECT_EQ(both, reference) << threads << " threads";
  }
}

TEST_F(DriverTest, StrictValidationFailureExitsTwo) {
  RunConfig cfg;
  cfg.inputs = {write("a.hap", ">x\n01\n10\n"), write("b.hap", ">x\n00\n00\n")};
  cfg.genotypes = write("g.txt", "x\t1 1\n");
  cfg.out_dir = (dir_ / "out").string();
  EXPECT_EQ(run(cfg), cli::exit_code::validation);
  EXPECT_NE(err_.str().find("'x'"), std::string::npos) << err_.str();

  cfg.policy = ValidationPolicy::Lenient;
  EXPECT_EQ(run(cfg), 0) << err_.str();
  const auto rec = nlohmann::json::parse(slurp(dir_ / "out" / "report.jsonl"));
  EXPECT_EQ(rec["masked"], nlohmann::json::array({1, 2}));
}

TEST_F(DriverTest, ParseErrorExitsTwo) {
  RunConfig cfg;
  cfg.inputs = {write("a.hap", ">x\n01\n102\n")};
  cfg.out_dir = (dir_ / "out").string();
  EXPECT_EQ(run(cfg), 2);
  EXPECT_NE(err_.str().find("ParseError"), std::string::npos);
}

TEST_F(DriverTest, IdsAbsentFromSomeInputs) {
  RunConfig cfg;
  cfg.inputs = {write("a.hap", ">x\n01\n10\n>y\n01\n10\n"), write("b.hap", ">x\n01\n10\n")};
  cfg.out_dir = (dir_ / "strict").string();
  ASSERT_EQ(run(cfg), 0);
  EXPECT_EQ(slurp(dir_ / "strict" / "consensus.hap"), ">x\n01\n10\n");
  EXPECT_NE(err_.str().find("y"), std::string::npos);

  cfg.policy = ValidationPolicy::Lenient;
  cfg.out_dir = (dir_ / "lenient").string();
  ASSERT_EQ(run(cfg), 0);
  EXPECT_EQ(slurp(dir_ / "lenient" / "consensus.hap"), ">x\n01\n10\n>y\n01\n10\n");

  cfg.fail_on_missing = true;
  EXPECT_EQ(run(cfg), 2);
}

TEST_F(DriverTest, MissingCallsAreReported) {
  RunConfig cfg;
  cfg.inputs = {write("a.hap", ">x\n010\n101\n"), write("b.hap", ">x\n011\n100\n"),
                write("c.hap", ">x\n000\n111\n")};
  cfg.genotypes = write("g.txt", "x\t1 ? 1\n");
  cfg.out_dir = (dir_ / "out").string();
  ASSERT_EQ(run(cfg), 0) << err_.str();
  const auto rec = nlohmann::json::parse(slurp(dir_ / "out" / "report.jsonl"));
  ASSERT_TRUE(rec.contains("resolved"));
  EXPECT_EQ(rec["resolved"][0]["marker"], 2);
}

TEST_F(DriverTest, OutliersAndAudit) {
  RunConfig cfg;
  cfg.inputs = {write("a.hap", ">ind1\n0000\n1111\n"), write("b.hap", ">ind1\n0011\n1100\n"),
                write("c.hap", ">ind1\n0101\n1010\n")};
  cfg.command = Command::Outliers;
  ASSERT_EQ(run(cfg), 0) << err_.str();
  EXPECT_NE(out_.str().find("\"disagreement\":6"), std::string::npos) << out_.str();
  cfg.command = Command::Audit;
  ASSERT_EQ(run(cfg), 0) << err_.str();
  EXPECT_NE(out_.str().find("\"violations\":0"), std::string::npos) << out_.str();
}

TEST(ResolveThreads, ExplicitWins) { EXPECT_EQ(cli::resolve_threads(3), 3u); }

}  // namespace
}  // namespace hapcombine
