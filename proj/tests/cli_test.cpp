// Copyright 2026 The zsfp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "zsfp/zsfp.hpp"

#ifndef ZSFP_CLI_PATH
#error "ZSFP_CLI_PATH must name the zsfp executable"
#endif

namespace zsfp {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("zsfp_cli_" + std::string(::testing::UnitTest::GetInstance()
                                          ->current_test_info()
                                          ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the CLI inside the scratch directory; returns the exit status and
  // keeps stdout/stderr for inspection.
  int zsfp(const std::string& args) {
    const std::string cmd = "cd '" + dir_.string() + "' && '" ZSFP_CLI_PATH "' " +
                            args + " > out.txt 2> err.txt";
    const int rc = std::system(cmd.c_str());
    out_ = slurp(dir_ / "out.txt");
    err_ = slurp(dir_ / "err.txt");
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  }
  std::string file(const std::string& name) { return slurp(dir_ / name); }
  void write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }

  fs::path dir_;
  std::string out_, err_;
};

TEST_F(Cli, GenerateIsValidAndDeterministic) {
  ASSERT_EQ(zsfp("generate --states 3 --actions 4 --gamma 0.8 --seed 7 --out g.json"), 0) << err_;
  ASSERT_EQ(zsfp("generate --states 3 --actions 4 --gamma 0.8 --seed 7 --out h.json"), 0);
  EXPECT_EQ(file("g.json"), file("h.json"));
  const GameSpec spec = load_spec(file("g.json"));
  EXPECT_EQ(spec, generate_random_game(3, 4, 0.8, 1.0, 7));
}

TEST_F(Cli, SeedFromEnvironment) {
  ASSERT_EQ(zsfp("generate --states 2 --actions 2 --gamma 0.5 --seed 11 --out a.json"), 0);
  ASSERT_EQ(zsfp("generate --states 2 --actions 2 --gamma 0.5 --out b.json"), 0);
  EXPECT_NE(file("a.json"), file("b.json"));
  const std::string env = "ZSFP_SEED=11 ";
  const std::string cmd = "cd '" + dir_.string() + "' && " + env + "'" ZSFP_CLI_PATH
                          "' generate --states 2 --actions 2 --gamma 0.5 --out c.json";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(file("a.json"), file("c.json"));
}

TEST_F(Cli, GenerateRejectsDiscountOne) {
  EXPECT_NE(zsfp("generate --states 3 --actions 4 --gamma 1.0 --out g.json"), 0);
  EXPECT_NE(err_.find("discount must be < 1"), std::string::npos);
  EXPECT_EQ(err_.find('\n'), err_.size() - 1);
  EXPECT_EQ(err_.rfind("error: ", 0), 0u);
}

TEST_F(Cli, UsageErrorsAreSingleLine) {
  EXPECT_NE(zsfp("generate --states 3"), 0);
  EXPECT_EQ(err_.rfind("error: ", 0), 0u);
  EXPECT_EQ(err_.find('\n'), err_.size() - 1);
  EXPECT_NE(zsfp("solve --spec missing.json --out s.json"), 0);
  EXPECT_EQ(err_.rfind("error: ", 0), 0u);
}

TEST_F(Cli, SolveMatchingPennies) {
  write("mp.json", save_spec(matching_pennies(0.8)));
  ASSERT_EQ(zsfp("solve --spec mp.json --out s.json"), 0) << err_;
  const auto doc = nlohmann::json::parse(file("s.json"));
  EXPECT_NEAR(doc["v_star"][0][0].get<double>(), 0.0, 1e-9);
  EXPECT_NEAR(doc["v_star"][1][0].get<double>(), 0.0, 1e-9);
}

TEST_F(Cli, SolveZeroDiscountCopiesPayoffs) {
  ASSERT_EQ(zsfp("generate --states 2 --actions 3 --gamma 0 --seed 3 --out g.json"), 0);
  ASSERT_EQ(zsfp("solve --spec g.json --out s.json"), 0);
  const GameSpec spec = load_spec(file("g.json"));
  const auto sol = load_solution(file("s.json"), &spec);
  for (int s = 0; s < 2; ++s) EXPECT_EQ(sol.q_star[Player::kOne][s], spec.payoff_1[s]);
}

TEST_F(Cli, SolveTightToleranceAndErrors) {
  ASSERT_EQ(zsfp("generate --states 3 --actions 4 --gamma 0.8 --seed 7 --out g.json"), 0);
  ASSERT_EQ(zsfp("solve --spec g.json --tol 1e-12 --out s.json"), 0);
  EXPECT_LE(nlohmann::json::parse(file("s.json"))["residual"].get<double>(), 1e-12);
  EXPECT_NE(zsfp("solve --spec g.json --tol 1e-12 --max-iters 2 --out s.json"), 0);
  EXPECT_NE(err_.find("max_iters"), std::string::npos);
  GameSpec general = matching_pennies(0.5);
  general.zero_sum = false;
  write("gs.json", save_spec(general));
  EXPECT_NE(zsfp("solve --spec gs.json --out s.json"), 0);
  EXPECT_NE(err_.find("zero-sum"), std::string::npos);
}

TEST_F(Cli, RunRowsHeaderAndRejections) {
  ASSERT_EQ(zsfp("generate --states 3 --actions 4 --gamma 0.8 --seed 7 --out g.json"), 0);
  ASSERT_EQ(zsfp("run --spec g.json --mode model-based --steps 100000 --alpha-exp 0.5 "
                 "--beta-exp 1.0 --seed 1 --record-every 100 --out t.csv"), 0) << err_;
  std::istringstream csv(file("t.csv"));
  std::string line;
  int data = 0;
  bool header = false;
  while (std::getline(csv, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      EXPECT_EQ(line, trace_header_row(3));
      continue;
    }
    ++data;
  }
  EXPECT_EQ(data, 1001);

  ASSERT_EQ(zsfp("run --spec g.json --mode model-free --epsilon 0.02 --beta-exp 0.75 "
                 "--steps 2000 --out m.csv"), 0) << err_;
  EXPECT_NE(file("m.csv").find("# epsilon=0.02"), std::string::npos);

  EXPECT_NE(zsfp("run --spec g.json --mode model-free --beta-exp 0.4 --steps 10 --out x.csv"), 0);
  EXPECT_NE(err_.find("2-b"), std::string::npos);
  EXPECT_NE(err_.find("squared"), std::string::npos);
  EXPECT_NE(zsfp("run --spec g.json --mode nonsense --steps 10 --out x.csv"), 0);
}

TEST_F(Cli, RunSeedRangeWritesOneFilePerSeed) {
  ASSERT_EQ(zsfp("generate --states 2 --actions 2 --gamma 0.5 --seed 1 --out g.json"), 0);
  ASSERT_EQ(zsfp("run --spec g.json --steps 5000 --seeds 3..5 --out t.csv"), 0) << err_;
  ASSERT_EQ(zsfp("run --spec g.json --steps 5000 --seed 4 --out single.csv"), 0);
  for (int s = 3; s <= 5; ++s) EXPECT_TRUE(fs::exists(dir_ / ("t.seed" + std::to_string(s) + ".csv")));
  EXPECT_EQ(file("t.seed4.csv"), file("single.csv"));
}

TEST_F(Cli, EvalPlantedRunIsZero) {
  ASSERT_EQ(zsfp("generate --states 3 --actions 4 --gamma 0.8 --seed 7 --out g.json"), 0);
  ASSERT_EQ(zsfp("solve --spec g.json --tol 1e-12 --out s.json"), 0);
  ASSERT_EQ(zsfp("run --spec g.json --steps 0 --solution s.json --init-from-solution --out p.csv"), 0)
      << err_;
  ASSERT_EQ(zsfp("eval --spec g.json --trace p.csv --solution s.json --json e.json"), 0) << err_;
  EXPECT_NE(out_.find("v_sum"), std::string::npos);
  const auto j = nlohmann::json::parse(file("e.json"));
  for (const char* k : {"v_sum", "zero_sum_defect", "lyapunov", "tracking_err", "q_err"}) {
    EXPECT_LE(std::abs(j[k]["final"].get<double>()), 1e-9) << k;
  }
  EXPECT_LE(j["exploitability"].get<double>(), 1e-9);
}

TEST_F(Cli, EvalZeroDiscountKeepsQExact) {
  write("mp.json", save_spec(matching_pennies(0.0)));
  ASSERT_EQ(zsfp("solve --spec mp.json --out s.json"), 0);
  ASSERT_EQ(zsfp("run --spec mp.json --steps 100000 --solution s.json --out t.csv"), 0);
  ASSERT_EQ(zsfp("eval --spec mp.json --trace t.csv --json e.json"), 0) << err_;
  const auto j = nlohmann::json::parse(file("e.json"));
  EXPECT_EQ(j["q_err"]["peak"].get<double>(), 0.0);
}

TEST_F(Cli, EvalRejectsMismatchedSpec) {
  ASSERT_EQ(zsfp("generate --states 3 --actions 2 --gamma 0.8 --seed 7 --out g.json"), 0);
  ASSERT_EQ(zsfp("generate --states 2 --actions 2 --gamma 0.8 --seed 7 --out h.json"), 0);
  ASSERT_EQ(zsfp("run --spec g.json --steps 1000 --out t.csv"), 0);
  EXPECT_NE(zsfp("eval --spec h.json --trace t.csv"), 0);
  EXPECT_NE(err_.find("states"), std::string::npos);
}

TEST_F(Cli, PlotPanelsDeterminismAndEmptyTrace) {
  ASSERT_EQ(zsfp("generate --states 3 --actions 4 --gamma 0.8 --seed 7 --out g.json"), 0);
  ASSERT_EQ(zsfp("solve --spec g.json --out s.json"), 0);
  ASSERT_EQ(zsfp("run --spec g.json --steps 10000 --record-every 10 --solution s.json --out t.csv"), 0);
  ASSERT_EQ(zsfp("plot --trace t.csv --solution s.json --out a.svg"), 0) << err_;
  ASSERT_EQ(zsfp("plot --trace t.csv --solution s.json --out b.svg"), 0);
  EXPECT_EQ(file("a.svg"), file("b.svg"));
  const std::string svg = file("a.svg");
  std::size_t panels = 0;
  for (auto p = svg.find("<g id=\"state"); p != std::string::npos; p = svg.find("<g id=\"state", p + 1)) ++panels;
  EXPECT_EQ(panels, 3u);

  write("empty.csv", "# mode=model-based\n" + trace_header_row(3) + "\n");
  EXPECT_NE(zsfp("plot --trace empty.csv --out e.svg"), 0);
  EXPECT_NE(err_.find("no records"), std::string::npos);
  write("bad.csv", "k,s,a1,a2,foo\n");
  EXPECT_NE(zsfp("plot --trace bad.csv --out e.svg"), 0);
  EXPECT_NE(err_.find("header"), std::string::npos);
}

}  // namespace
}  // namespace zsfp
