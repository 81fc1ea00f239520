#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli/app.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("ogb_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(std::vector<std::string> args, bool with_output_dir = true) {
    args.insert(args.begin(), "ogb");
    if (with_output_dir && args.size() > 1 && args[1].rfind("--", 0) != 0) {
      args.push_back("-o");
      args.push_back(dir_.string());
    }
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Result r;
    r.code = ogb::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
  }

  json summary(const std::string& stem) const {
    std::ifstream f(dir_ / (stem + ".json"));
    return json::parse(f);
  }

  std::vector<std::vector<std::string>> tsv(const std::string& stem) const {
    std::ifstream f(dir_ / (stem + ".tsv"));
    std::vector<std::vector<std::string>> rows;
    for (std::string line; std::getline(f, line);) {
      std::vector<std::string> cells;
      std::istringstream ls(line);
      for (std::string cell; std::getline(ls, cell, '\t');) cells.push_back(cell);
      rows.push_back(cells);
    }
    return rows;
  }

  std::string slurp(const std::string& file) const {
    std::ifstream f(dir_ / file);
    return {std::istreambuf_iterator<char>(f), {}};
  }

  fs::path dir_;
};

TEST_F(Cli, EtaAutoIsEchoed) {
  const Result r = run({"run", "--algo", "span", "--eta", "auto", "--stages", "16", "--synthetic", "planted",
                        "--rounds", "500"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json s = summary("run");
  EXPECT_EQ(s["config"]["eta"], "auto");
  EXPECT_NEAR(s["resolved"]["step"].get<double>(), std::log(16.0) / 16.0, 1e-15);
  EXPECT_NEAR(s["resolved"]["step"].get<double>(), 0.1733, 5e-5);
}

TEST_F(Cli, InvalidEtaCitesItsInterval) {
  const Result r = run({"run", "--eta", "2", "--synthetic", "planted"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("[1/N, 1]"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir_ / "run.json"));
}

TEST_F(Cli, ValidationListsEveryViolation) {
  const Result r = run({"run", "--algo", "span", "--eta", "0.01", "--base", "tree", "--split", "2",
                        "--scale", "0.5"});
  EXPECT_EQ(r.code, 2);
  for (const char* what : {"--eta", "--base", "--split", "--scale", "--data and --synthetic"}) {
    EXPECT_NE(r.err.find(what), std::string::npos) << what << " missing from\n" << r.err;
  }
}

TEST_F(Cli, SingleStageHullBoosterMatchesBareLearner) {
  const Result r = run({"run", "--algo", "ch", "--stages", "1", "--base", "ogd", "--loss", "squared",
                        "--synthetic", "planted", "--rounds", "2000"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json t = summary("run")["totals"];
  EXPECT_EQ(t["loss"]["total"].get<double>(), t["baseline"]["zero"]["total"].get<double>());
}

TEST_F(Cli, EchoedConfigReproducesTheTrace) {
  ASSERT_EQ(run({"run", "--algo", "span", "--stages", "8", "--base", "hedge-pool", "--synthetic", "planted",
                 "--rounds", "1500", "--seed", "9", "--noise", "0.05"})
                .code,
            0);
  const std::string summary_path = (dir_ / "run.json").string();
  const Result again = run({"run", "--config", summary_path, "--name", "again"});
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(slurp("run.tsv"), slurp("again.tsv"));
  EXPECT_FALSE(slurp("run.tsv").empty());
}

TEST_F(Cli, FlagsOverrideTheConfigFile) {
  ASSERT_EQ(run({"run", "--synthetic", "planted", "--rounds", "300", "--stages", "4"}).code, 0);
  const Result r = run({"run", "--config", (dir_ / "run.json").string(), "--stages", "6", "--name", "b"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(summary("b")["config"]["stages"], 6);
  EXPECT_EQ(summary("b")["config"]["rounds"], 300);
}

TEST_F(Cli, UnknownConfigKeysAreRejected) {
  std::ofstream(dir_ / "c.json") << R"({"stages": 3, "depth": 2, "eta": 5})";
  const Result r = run({"run", "--config", (dir_ / "c.json").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("depth"), std::string::npos);
  EXPECT_NE(r.err.find("'eta'"), std::string::npos);
}

TEST_F(Cli, TraceHasOneRowPerRound) {
  ASSERT_EQ(run({"run", "--synthetic", "additive", "--rounds", "250", "--base", "stump"}).code, 0);
  const auto rows = tsv("run");
  ASSERT_EQ(rows.size(), 251u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"round", "test_loss", "cum_loss", "cum_regret"}));
  double cumulative = 0.0;
  for (std::size_t t = 1; t < rows.size(); ++t) {
    ASSERT_EQ(rows[t].size(), 4u);
    EXPECT_EQ(std::stoul(rows[t][0]), t);
    cumulative += std::stod(rows[t][1]);
    EXPECT_NEAR(std::stod(rows[t][2]), cumulative, 1e-9 * (1.0 + cumulative));
  }
}

TEST_F(Cli, AssertBoundsPassesOnPlantedStreams) {
  for (const char* algo : {"span", "ch"}) {
    const Result r = run({"run", "--algo", algo, "--stages", "6", "--base", "hedge-pool", "--synthetic",
                          "planted", "--rounds", "3000", "--assert-bounds", "--name", algo});
    EXPECT_EQ(r.code, 0) << algo << ": " << r.out << r.err;
    const json s = summary(algo);
    ASSERT_EQ(s["bounds"].size(), 1u);
    EXPECT_TRUE(s["pass"].get<bool>());
  }
}

TEST_F(Cli, AssertBoundsNeedsAMeasurableSetting) {
  const Result r = run({"run", "--synthetic", "additive", "--base", "ogd", "--assert-bounds"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--assert-bounds needs --synthetic planted"), std::string::npos);
  EXPECT_NE(r.err.find("--assert-bounds needs --base hedge-pool"), std::string::npos);
}

TEST_F(Cli, LowerBoundReportsRegretAndReference) {
  const Result r = run({"lower-bound", "--stages", "4", "--scale-c", "0.02"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("measured regret"), std::string::npos);
  EXPECT_NE(r.out.find("reference c T / N = 12"), std::string::npos) << r.out;  // 0.02 * 2400 / 4
  const json s = summary("lower-bound");
  EXPECT_EQ(s["resolved"]["pool_size"], 200);
  EXPECT_EQ(s["resolved"]["rounds"], 2400);
}

TEST_F(Cli, LowerBoundAssertionFailureExitsWithFour) {
  // M = N: a two-function pool over 24 rounds cannot produce regret T / N = 12.
  const Result r = run({"lower-bound", "--stages", "2", "--scale-c", "1", "--assert-bounds"});
  EXPECT_EQ(r.code, 4) << r.out << r.err;
}

TEST_F(Cli, GridRunsEveryPointAndEchoesTheRule) {
  const Result r = run({"grid", "--synthetic", "planted", "--rounds", "800", "--grid-lr", "0.1,0.5",
                        "--grid-stages", "3,6", "--workers", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json s = summary("grid");
  const json& results = s["totals"]["results"];
  ASSERT_EQ(results.size(), 4u);
  EXPECT_NE(s["resolved"]["rule"].get<std::string>().find("tuning-half"), std::string::npos);
  EXPECT_NE(r.out.find("selection rule"), std::string::npos);

  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i]["tune_loss"].get<double>() < results[best]["tune_loss"].get<double>()) best = i;
  }
  EXPECT_EQ(s["totals"]["selected"], best);
  int selected_rows = 0;
  for (const auto& row : tsv("grid")) selected_rows += row.back() == "1";
  EXPECT_EQ(selected_rows, 1);
}

TEST_F(Cli, BatchCompareBoundColumnsMatchTheirFormulas) {
  constexpr double eta = 0.1, w = 2.0, beta = 1.0;
  const Result r = run({"batch-compare", "--stages", "60", "--eta", "0.1", "--l1", "2", "--seed", "6006"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = tsv("batch-compare");
  ASSERT_EQ(rows.size(), 62u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"stage", "s_i", "delta_zy", "zy_bound", "delta_gated",
                                                "gated_bound"}));
  const double d0 = std::stod(rows[1][2]);
  EXPECT_EQ(std::stod(rows[1][4]), d0);
  for (std::size_t n = 1; n <= 60; ++n) {
    const double sn = 1.0 + eta * static_cast<double>(n);
    double zy = (1.0 + w) / (sn + w) * d0, gated = std::exp(-(sn - 1.0) / w) * d0;
    for (std::size_t i = 1; i <= n; ++i) {
      const double si = 1.0 + eta * static_cast<double>(i);
      zy += (si + w) / (sn + w) * beta / 2.0 * eta * eta;
      gated += std::exp(-(sn - si) / w) * beta / 2.0 * eta * eta * (si * si + 1.0);
    }
    const auto& row = rows[n + 1];
    EXPECT_NEAR(std::stod(row[1]), sn, 1e-12);
    EXPECT_NEAR(std::stod(row[3]), zy, 1e-12) << "stage " << n;
    EXPECT_NEAR(std::stod(row[5]), gated, 1e-12) << "stage " << n;
    EXPECT_LE(std::stod(row[2]), std::stod(row[3]));
    EXPECT_LE(std::stod(row[4]), std::stod(row[5]));
  }
}

TEST_F(Cli, MalformedInputIsARuntimeError) {
  std::ofstream(dir_ / "bad.svm") << "1 1:0.5\n-1 1:x\n";
  const Result r = run({"run", "--data", (dir_ / "bad.svm").string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_EQ(run({"run", "--data", (dir_ / "missing.svm").string()}).code, 3);
}

TEST_F(Cli, ReadsCsvData) {
  std::ofstream f(dir_ / "d.csv");
  f << "label,a,b\n";
  for (int t = 0; t < 200; ++t) f << (t % 3) * 0.5 - 0.5 << ',' << (t % 3) << ',' << (t % 7) * 0.1 << '\n';
  f.close();
  const Result r = run({"run", "--data", (dir_ / "d.csv").string(), "--format", "csv", "--base", "hedge-pool",
                        "--label-range", "symmetric"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(summary("run")["resolved"]["rounds"], 200);
  EXPECT_EQ(summary("run")["resolved"]["pool_size"], 5);  // two features, symmetrized, plus zero
}

TEST_F(Cli, OutputDirectoryFallsBackToTheEnvironment) {
  const fs::path env = dir_ / "from_env";
  ::setenv("OGB_OUTPUT_DIR", env.c_str(), 1);
  const Result r = run({"batch-compare", "--stages", "5"}, false);
  ::unsetenv("OGB_OUTPUT_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(env / "batch-compare.tsv"));
  EXPECT_TRUE(fs::exists(env / "batch-compare.json"));
}

TEST_F(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run({"run", "--help"}, false).code, 0);
  EXPECT_EQ(run({}, false).code, 2);
  EXPECT_EQ(run({"run", "--no-such-flag"}, false).code, 2);
}

TEST_F(Cli, GreedyAndScalingModesRun) {
  EXPECT_EQ(run({"run", "--base", "greedy", "--greedy-offsets", "--synthetic", "planted", "--rounds", "400",
                 "--name", "greedy"})
                .code,
            0);
  EXPECT_EQ(run({"run", "--base", "ogd", "--symmetrize", "--scale", "2", "--corollary-mode", "--synthetic",
                 "additive", "--rounds", "400", "--name", "scaled"})
                .code,
            0);
  EXPECT_NEAR(summary("scaled")["resolved"]["radius"].get<double>(), 2.0 * std::log(10.0), 1e-12);
}

}  // namespace
