#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "choquet/cli.hpp"
#include "choquet/data.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using choquet::cli::run;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "choquet_fusion");
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("choquet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_file(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path;
  }

  fs::path dir_;
};

const std::string kSeparable =
    "person_id,label,m1,m2,m3\n"
    "c1,client,0.9,0.8,0.7\n"
    "c2,client,0.8,0.95,0.6\n"
    "i1,impostor,0.1,0.3,0.2\n"
    "i2,impostor,0.2,0.1,0.4\n";

}  // namespace

TEST_F(CliTest, FusePrintsSubsetTable) {
  const auto r = invoke({"fuse", "--synthetic", "--densities", "0.35,0.25,0.3", "--out",
                         dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("lambda = 0.36104"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("m12      = 0.631"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("m13      = 0.687"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("m23      = 0.577"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("m123     = 1"), std::string::npos) << r.out;

  const auto rows = lines_of(slurp(dir_ / "fused.csv"));
  ASSERT_EQ(rows.size(), 61u);
  EXPECT_EQ(rows[0], "person_id,label,fused");
  EXPECT_EQ(rows[1].rfind("P1,client,", 0), 0u);
  EXPECT_EQ(rows[60].rfind("P60,impostor,", 0), 0u);
}

TEST_F(CliTest, FuseAdditiveMeasureHasZeroLambda) {
  const auto r = invoke({"fuse", "--synthetic", "--densities", "0.3,0.3,0.4", "--out",
                         dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("lambda = 0\n"), std::string::npos) << r.out;
}

TEST_F(CliTest, FuseScoreRule) {
  const auto r = invoke({"fuse", "--synthetic", "--rule", "prod", "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines_of(slurp(dir_ / "fused.csv"));
  EXPECT_EQ(rows[1], "P1,client,0.9411919999999999");  // shortest repr of 0.98^3
}

TEST_F(CliTest, OptimizeStopsOnThreshold) {
  const auto input = write_file("sep.csv", kSeparable);
  const auto r = invoke({"optimize", "--input", input.string(), "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(slurp(dir_ / "measure.json"));
  EXPECT_EQ(doc.at("stop_reason"), "threshold");
  EXPECT_EQ(doc.at("generations"), 0);
  EXPECT_EQ(doc.at("evaluation").at("eer"), 0.0);
  EXPECT_EQ(doc.at("densities").size(), 3u);
  EXPECT_EQ(doc.at("subsets").size(), 7u);
  EXPECT_EQ(lines_of(slurp(dir_ / "history.csv")).size(), 2u);
}

TEST_F(CliTest, OptimizeIsReproducible) {
  const std::vector<std::string> base{"optimize", "--synthetic", "--generations", "30",
                                      "--seed", "11"};
  auto a = base;
  a.insert(a.end(), {"--out", (dir_ / "a").string()});
  auto b = base;
  b.insert(b.end(), {"--out", (dir_ / "b").string(), "--threads", "3"});
  ASSERT_EQ(invoke(a).code, 0);
  ASSERT_EQ(invoke(b).code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "history.csv"), slurp(dir_ / "b" / "history.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "measure.json"), slurp(dir_ / "b" / "measure.json"));
  const auto doc = nlohmann::json::parse(slurp(dir_ / "a" / "measure.json"));
  EXPECT_EQ(doc.at("stop_reason"), "max_generations");
  EXPECT_EQ(doc.at("generations"), 30);
  EXPECT_EQ(lines_of(slurp(dir_ / "a" / "history.csv")).size(), 32u);
}

TEST_F(CliTest, CompareWithGivenMeasure) {
  const auto r = invoke({"compare", "--synthetic", "--densities", "0.411,0.547,0.362",
                         "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines_of(slurp(dir_ / "comparison.csv"));
  const std::vector<std::string> expected{
      "rule,threshold,error_rate_pct,eer_pct,min_error_rate_pct",
      "M1,0.5,13.33,",
      "M2,0.5,20.00,",
      "M3,0.5,38.33,",
      "and,0.5,28.33,",
      "or,0.5,30.00,",
      "prod,0.5,40.00,",
      "mean,0.5,8.33,",
      "min,0.5,",
      "max,0.5,",
      "vote,0.5,13.33,",
      "choquet,0.5,5.00,6.67,5.00"};
  ASSERT_EQ(rows.size(), expected.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].rfind(expected[k], 0), 0u) << rows[k];
  }
  for (const char* name : {"M1", "and", "vote", "choquet"}) {
    EXPECT_TRUE(fs::exists(dir_ / (std::string("roc_") + name + ".csv"))) << name;
  }
}

TEST_F(CliTest, CompareRunsOptimizerWithoutMeasure) {
  const auto r = invoke({"compare", "--synthetic", "--generations", "20", "--weights",
                         "0.3,0.3,0.4", "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("optimizing densities"), std::string::npos);
  const auto rows = lines_of(slurp(dir_ / "comparison.csv"));
  ASSERT_EQ(rows.size(), 13u);
  EXPECT_EQ(rows[11].rfind("weighted_sum,", 0), 0u);
  EXPECT_EQ(rows[12].rfind("choquet,", 0), 0u);
}

TEST_F(CliTest, EvalWritesReport) {
  const auto r = invoke({"eval", "--synthetic", "--densities", "0.411,0.547,0.362", "--out",
                         dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(slurp(dir_ / "eval.json"));
  EXPECT_EQ(doc.at("rule"), "choquet");
  EXPECT_NEAR(doc.at("eer").get<double>(), 2.0 / 30.0, 1e-12);
  EXPECT_NEAR(doc.at("error_rate_at_threshold").get<double>(), 3.0 / 60.0, 1e-15);
  EXPECT_NEAR(doc.at("min_error_rate").get<double>(), 3.0 / 60.0, 1e-15);
  const auto roc = lines_of(slurp(dir_ / "roc.csv"));
  EXPECT_EQ(roc.front(), "threshold,far,frr");
  EXPECT_EQ(roc[1], "-inf,1,0");
  EXPECT_EQ(roc.back(), "inf,0,1");
}

TEST_F(CliTest, MeasureFileRoundTrip) {
  const auto input = write_file("sep.csv", kSeparable);
  ASSERT_EQ(invoke({"optimize", "--input", input.string(), "--out", dir_.string()}).code, 0);
  const auto r = invoke({"eval", "--input", input.string(), "--measure-file",
                         (dir_ / "measure.json").string(), "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("EER = 0.00%"), std::string::npos) << r.out;
}

TEST_F(CliTest, ConfigFileIsOverriddenByFlags) {
  const auto config = write_file("run.toml",
                                 "synthetic = true\n"
                                 "rule = \"prod\"\n"
                                 "threshold = 0.9\n");
  auto r = invoke({"eval", "--config", config.string(), "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = nlohmann::json::parse(slurp(dir_ / "eval.json"));
  EXPECT_EQ(doc.at("rule"), "prod");
  EXPECT_EQ(doc.at("threshold"), 0.9);

  r = invoke({"eval", "--config", config.string(), "--rule", "mean", "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  doc = nlohmann::json::parse(slurp(dir_ / "eval.json"));
  EXPECT_EQ(doc.at("rule"), "mean");
  EXPECT_EQ(doc.at("threshold"), 0.9);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(invoke({}).code, 1);
  EXPECT_EQ(invoke({"--help"}).code, 0);
  EXPECT_EQ(invoke({"fuse", "--synthetic", "--bogus"}).code, 1);
  EXPECT_EQ(invoke({"fuse", "--out", dir_.string()}).code, 1);
  EXPECT_EQ(invoke({"fuse", "--synthetic", "--out", dir_.string()}).code, 1);
  EXPECT_EQ(invoke({"fuse", "--synthetic", "--densities", "0.5,1.5,0.2", "--out",
                    dir_.string()}).code, 1);
  EXPECT_EQ(invoke({"eval", "--synthetic", "--rule", "median", "--out", dir_.string()}).code, 1);

  const auto missing = invoke({"fuse", "--input", (dir_ / "none.csv").string(), "--rule",
                               "mean", "--out", dir_.string()});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("none.csv"), std::string::npos);

  const auto bad = write_file("bad.csv", "person_id,label,m1\na,client,1.7\nb,impostor,0\n");
  const auto r = invoke({"fuse", "--input", bad.string(), "--rule", "mean", "--out",
                         dir_.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("row 2, column 3"), std::string::npos) << r.err;
}
