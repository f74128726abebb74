// Copyright 2026 The qinsight Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "qinsight/cli/cli.hpp"
#include "qinsight/core/error.hpp"

namespace qinsight::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("qinsight_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    auto r = run_cli({"synth", "--students", "300", "--questions", "30", "--density", "0.4", "--seed", "3", "--out",
                      (dir_ / "data").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    r = run_cli({"train", "--input", answers(), "--min-question-answers", "10", "--min-student-answers", "5", "--checkpoint", ckpt(), "--epochs", "3", "--seed", "4", "--trace",
                 (dir_ / "trace.tsv").string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string answers() { return (dir_ / "data" / "answers.csv").string(); }
  static std::string truth() { return (dir_ / "data" / "question_truth.tsv").string(); }
  static std::string ckpt() { return (dir_ / "model.ckpt").string(); }
  static fs::path dir_;
};

fs::path CliTest::dir_;

TEST_F(CliTest, SynthRowCountNearExpectation) {
  const auto dir = dir_ / "big";
  const auto r = run_cli({"synth", "--students", "2000", "--questions", "300", "--density", "0.2", "--seed", "7",
                          "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(slurp(dir / "answers.csv"));
  // header plus about 120000 answers; sd = sqrt(600000 * 0.2 * 0.8) ~ 310
  EXPECT_NEAR(static_cast<double>(rows.size() - 1), 120000.0, 1500.0);
  EXPECT_EQ(rows.front().substr(0, 29), "student_id,question_id,is_cor");
}

TEST_F(CliTest, SynthIsDeterministic) {
  const auto a = dir_ / "a", b = dir_ / "b";
  for (const auto& d : {a, b})
    ASSERT_EQ(run_cli({"synth", "--students", "50", "--questions", "10", "--seed", "9", "--out", d.string()}).code, 0);
  for (const char* f : {"answers.csv", "question_truth.tsv", "student_truth.tsv", "topics.csv"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  auto r = run_cli({"synth", "--density", "1.1", "--out", (dir_ / "bad").string()});
  EXPECT_EQ(r.code, 2);
  r = run_cli({"train", "--checkpoint", (dir_ / "x.ckpt").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--input"), std::string::npos) << r.err;
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"eval", "--input", answers(), "--min-question-answers", "10", "--min-student-answers", "5", "--checkpoint", ckpt(), "--methods", "pvae,svd"}).code, 2);
  EXPECT_EQ(run_cli({"train", "--input", answers(), "--min-question-answers", "10", "--min-student-answers", "5", "--checkpoint", (dir_ / "x.ckpt").string(), "--lr", "-1"}).code,
            2);
}

TEST_F(CliTest, RuntimeFailureExitsOne) {
  const auto bad = dir_ / "bad.csv";
  std::ofstream(bad) << "who,what\n1,2\n";
  EXPECT_EQ(run_cli({"train", "--input", bad.string(), "--checkpoint", (dir_ / "x.ckpt").string()}).code, 1);
}

TEST_F(CliTest, ProcessExitCodes) {
  const std::string cli = QINSIGHT_CLI_PATH;
  EXPECT_EQ(WEXITSTATUS(std::system((cli + " --help > /dev/null").c_str())), 0);
  EXPECT_EQ(WEXITSTATUS(std::system((cli + " synth --density 1.1 --out /tmp/none 2> /dev/null").c_str())), 2);
}

TEST_F(CliTest, TrainTraceRows) {
  const auto trace = lines(slurp(dir_ / "trace.tsv"));
  ASSERT_EQ(trace.size(), 4u);
  EXPECT_EQ(trace[0], "epoch\ttrain_elbo\tvalidation_elbo");
  const auto one = dir_ / "one.tsv";
  ASSERT_EQ(run_cli({"train", "--input", answers(), "--min-question-answers", "10", "--min-student-answers", "5", "--checkpoint", (dir_ / "one.ckpt").string(), "--epochs", "1",
                     "--trace", one.string()})
                .code,
            0);
  EXPECT_EQ(lines(slurp(one)).size(), 2u);
}

TEST_F(CliTest, DefaultTrainingRunsFiftyEpochs) {
  const auto trace = dir_ / "default.tsv";
  const auto ckpt_path = dir_ / "default.ckpt";
  ASSERT_EQ(run_cli({"train", "--input", answers(), "--min-question-answers", "10", "--min-student-answers", "5",
                     "--checkpoint", ckpt_path.string(), "--trace", trace.string()})
                .code,
            0);
  EXPECT_EQ(lines(slurp(trace)).size(), 51u);
  const auto r = run_cli({"eval", "--input", answers(), "--min-question-answers", "10", "--min-student-answers", "5",
                          "--checkpoint", ckpt_path.string(), "--methods", "pvae"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST_F(CliTest, EvalTableAndReproducible) {
  const std::vector<std::string> args{"eval", "--input", answers(), "--min-question-answers", "10", "--min-student-answers", "5", "--checkpoint", ckpt(), "--seed", "5",
                                      "--irt-epochs", "50"};
  const auto a = run_cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  const auto rows = lines(a.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "method\taccuracy\tmae\tnum_targets");
  EXPECT_EQ(rows[1].substr(0, 5), "pvae\t");
  EXPECT_EQ(rows[2].substr(0, 4), "irt\t");
  EXPECT_EQ(rows[3].substr(0, 7), "random\t");
  EXPECT_EQ(rows[4].substr(0, 9), "majority\t");
  EXPECT_EQ(run_cli(args).out, a.out);
}

TEST_F(CliTest, DifficultyWithTruth) {
  const auto r = run_cli({"difficulty", "--input", answers(), "--min-question-answers", "10", "--min-student-answers", "5", "--checkpoint", ckpt(), "--truth", truth(), "--output",
                          (dir_ / "difficulty.tsv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "scheme\tspearman_vs_truth");
  for (std::size_t k = 1; k < 5; ++k) {
    const auto tab = rows[k].find('\t');
    const double v = std::stod(rows[k].substr(tab + 1));
    EXPECT_GE(v, -1.0);
    EXPECT_LE(v, 1.0);
  }
  const auto report = lines(slurp(dir_ / "difficulty.tsv"));
  EXPECT_EQ(report.size(), 31u);
  EXPECT_EQ(report[0], "question_id\teasiness\tdifficulty\tn_observed");
}

TEST_F(CliTest, QualityWithTruth) {
  const auto r = run_cli({"quality", "--input", answers(), "--min-question-answers", "10", "--min-student-answers", "5", "--checkpoint", ckpt(), "--truth", truth(), "--output",
                          (dir_ / "quality.tsv").string(), "--max-samples", "50"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1].substr(0, 2), "R\t");
  EXPECT_EQ(rows[2].substr(0, 8), "entropy\t");
  EXPECT_EQ(lines(slurp(dir_ / "quality.tsv"))[0], "question_id\tR\tentropy\tS");
}

TEST_F(CliTest, SelectTableShape) {
  const auto r = run_cli({"select", "--input", answers(), "--min-question-answers", "10", "--min-student-answers", "5", "--checkpoint", ckpt(), "--strategies", "ours,rand,sing",
                          "--runs", "2", "--students-per-run", "5", "--steps", "4", "--reward-samples", "5",
                          "--impute-samples", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 1u + 3u * 4u);
  EXPECT_EQ(rows[0], "strategy\tstep\tmean_mae\tstderr");
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  const auto cfg = dir_ / "run.conf";
  std::ofstream(cfg) << "# shared settings\nepochs = 2\nseed = 4\n\nlr = 0.002\n";
  const auto t1 = dir_ / "cfg1.tsv", t2 = dir_ / "cfg2.tsv";
  ASSERT_EQ(run_cli({"train", "--config", cfg.string(), "--input", answers(), "--min-question-answers", "10", "--min-student-answers", "5", "--checkpoint",
                     (dir_ / "c1.ckpt").string(), "--trace", t1.string()})
                .code,
            0);
  EXPECT_EQ(lines(slurp(t1)).size(), 3u);
  ASSERT_EQ(run_cli({"train", "--config", cfg.string(), "--epochs", "1", "--input", answers(), "--min-question-answers", "10", "--min-student-answers", "5", "--checkpoint",
                     (dir_ / "c2.ckpt").string(), "--trace", t2.string()})
                .code,
            0);
  EXPECT_EQ(lines(slurp(t2)).size(), 2u);

  std::istringstream bad("epochs 3\n");
  EXPECT_THROW(parse_config(bad), ConfigError);
  EXPECT_EQ(run_cli({"train", "--config", (dir_ / "missing.conf").string()}).code, 2);
}

}  // namespace
}  // namespace qinsight::cli
