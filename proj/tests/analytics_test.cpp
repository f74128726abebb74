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

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "qinsight/analytics/difficulty.hpp"
#include "qinsight/analytics/quality.hpp"
#include "qinsight/analytics/reports.hpp"
#include "qinsight/analytics/spearman.hpp"
#include "qinsight/core/error.hpp"
#include "qinsight/core/gaussian.hpp"

namespace qinsight::analytics {
namespace {

using data::Answer;
using data::AnswerMatrix;

// -1 marks an unobserved cell.
AnswerMatrix dense(const std::vector<std::vector<int>>& cells) {
  std::vector<std::string> students, questions;
  std::vector<std::vector<Answer>> rows;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    students.push_back("s" + std::to_string(i));
    rows.emplace_back();
    for (std::size_t j = 0; j < cells[i].size(); ++j)
      if (cells[i][j] >= 0) rows.back().push_back({static_cast<int>(j), cells[i][j]});
  }
  for (std::size_t j = 0; j < cells.front().size(); ++j) questions.push_back("q" + std::to_string(j));
  return AnswerMatrix(students, questions, rows);
}

TEST(Spearman, HandComputedCases) {
  const std::vector<double> a{1, 2, 3, 4}, b{1, 3, 2, 4}, r{4, 3, 2, 1};
  EXPECT_NEAR(*spearman(a, b), 0.8, 1e-15);
  EXPECT_NEAR(*spearman(a, a), 1.0, 1e-15);
  EXPECT_NEAR(*spearman(a, r), -1.0, 1e-15);
}

TEST(Spearman, ConstantInputIsUndefined) {
  const std::vector<double> a{1, 2, 3}, c{5, 5, 5};
  EXPECT_FALSE(spearman(a, c).has_value());
  EXPECT_FALSE(spearman(c, a).has_value());
  EXPECT_THROW(spearman(std::vector<double>{1}, std::vector<double>{2}), ConfigError);
  EXPECT_THROW(spearman(a, std::vector<double>{1, 2}), ConfigError);
}

TEST(Spearman, TiesShareAverageRanks) {
  const auto ranks = average_ranks(std::vector<double>{10, 20, 10, 30});
  EXPECT_EQ(ranks, (std::vector<double>{1.5, 3, 1.5, 4}));
}

TEST(Spearman, SymmetricAndMonotoneInvariant) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> a(30), b(30), ea(30), cb(30);
    for (int k = 0; k < 30; ++k) {
      a[k] = n(rng);
      b[k] = a[k] + n(rng);
      ea[k] = std::exp(a[k]);
      cb[k] = b[k] * b[k] * b[k] - 7.0;
    }
    const double s = *spearman(a, b);
    EXPECT_DOUBLE_EQ(s, *spearman(b, a));
    EXPECT_NEAR(s, *spearman(ea, cb), 1e-12);
    EXPECT_GE(s, -1.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(Entropy, Values) {
  EXPECT_NEAR(binary_entropy(0.5), std::log(2.0), 1e-15);
  EXPECT_NEAR(binary_entropy(0.9), 0.3251, 1e-4);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  for (double p = 0.01; p < 1.0; p += 0.01) EXPECT_LE(binary_entropy(p), binary_entropy(0.5));
}

TEST(Entropy, BaselineUsesObservedRate) {
  const auto m = dense({{1, 1}, {1, 0}, {-1, 1}, {1, -1}});
  EXPECT_EQ(entropy_baseline(m, 0), 0.0);
  EXPECT_NEAR(entropy_baseline(m, 1), binary_entropy(2.0 / 3.0), 1e-15);
}

TEST(Difficulty, FullyObservedEqualsColumnMeans) {
  const auto m = testing::synthetic_matrix(40, 12, 1.0, 2);
  const pvae::PVae model = testing::random_model(testing::tiny_config(12), 3);
  const auto report = difficulty(model, m);
  const auto counts = m.column_counts();
  const auto correct = m.column_correct();
  for (int j = 0; j < 12; ++j) {
    EXPECT_NEAR(report.easiness[j], static_cast<double>(correct[j]) / counts[j], 1e-12);
    EXPECT_NEAR(report.easiness[j] + report.difficulty[j], 1.0, 1e-15);
    EXPECT_EQ(report.n_observed[j], 40);
    EXPECT_EQ(report.n_imputed[j], 0);
  }
}

TEST(Difficulty, AllCorrectColumn) {
  const auto m = dense({{1, 0}, {1, 1}, {1, 0}});
  const auto report = difficulty(testing::random_model(testing::tiny_config(2), 4), m);
  EXPECT_EQ(report.easiness[0], 1.0);
  EXPECT_EQ(report.difficulty[0], 0.0);
}

TEST(Difficulty, ImputedCellsUseModelAndStayInRange) {
  const auto m = testing::synthetic_matrix(30, 10, 0.4, 5);
  const auto report = difficulty(testing::random_model(testing::tiny_config(10), 6), m, {20, 7, 1});
  for (int j = 0; j < 10; ++j) {
    EXPECT_GE(report.easiness[j], 0.0);
    EXPECT_LE(report.easiness[j], 1.0);
    EXPECT_EQ(report.n_observed[j] + report.n_imputed[j], 30);
  }
  const auto again = difficulty(testing::random_model(testing::tiny_config(10), 6), m, {20, 7, 1});
  EXPECT_EQ(report.easiness, again.easiness);
}

TEST(DifficultyBaseline, MajorityFillsThreeOfFive) {
  const auto m = dense({{1}, {1}, {0}, {1}, {0}, {-1}, {-1}});
  const auto report = difficulty_baseline(m, DifficultyScheme::kMajorityImpute);
  EXPECT_NEAR(report.easiness[0], 5.0 / 7.0, 1e-15);
}

TEST(DifficultyBaseline, ObservedOnlyMatchesModelOnFullMatrix) {
  const auto m = testing::synthetic_matrix(25, 8, 1.0, 8);
  const auto observed = difficulty_baseline(m, DifficultyScheme::kObservedOnly);
  const auto model = difficulty(testing::random_model(testing::tiny_config(8), 9), m);
  for (int j = 0; j < 8; ++j) EXPECT_NEAR(observed.easiness[j], model.easiness[j], 1e-12);
}

TEST(DifficultyBaseline, RandomIsSeeded) {
  const auto m = testing::synthetic_matrix(10, 20, 0.5, 10);
  const auto a = difficulty_baseline(m, DifficultyScheme::kRandom, 1);
  EXPECT_EQ(a.easiness, difficulty_baseline(m, DifficultyScheme::kRandom, 1).easiness);
  EXPECT_NE(a.easiness, difficulty_baseline(m, DifficultyScheme::kRandom, 2).easiness);
}

TEST(Topics, Ordering) {
  const auto m = dense({{1, 1, 1}});
  DifficultyReport report;
  report.difficulty = {0.9, 0.1, 0.5};
  report.easiness = {0.1, 0.9, 0.5};
  data::QuestionMeta meta;
  meta.topics = {{"algebra"}, {"number"}, {"algebra", "number"}};
  const auto ranking = topic_ranking(report, meta, m);
  ASSERT_EQ(ranking.topics.size(), 2u);
  EXPECT_EQ(ranking.topics[0].topic, "algebra");
  EXPECT_NEAR(ranking.topics[0].mean_difficulty, 0.7, 1e-15);
  EXPECT_EQ(ranking.topics[1].topic, "number");
  EXPECT_NEAR(ranking.topics[1].mean_difficulty, 0.3, 1e-15);
  EXPECT_EQ(ranking.topics[0].num_questions, 2);
}

TEST(Topics, SingleTopicTiesAndMissing) {
  const auto m = dense({{1, 1, 1}});
  DifficultyReport report;
  report.difficulty = {0.4, 0.4, 0.2};
  report.easiness = {0.6, 0.6, 0.8};
  data::QuestionMeta meta;
  meta.topics = {{"b"}, {"a"}, {}};
  const auto ranking = topic_ranking(report, meta, m);
  ASSERT_EQ(ranking.topics.size(), 2u);
  EXPECT_EQ(ranking.topics[0].topic, "a");
  EXPECT_EQ(ranking.warnings.size(), 1u);
  EXPECT_NE(ranking.warnings[0].find("q2"), std::string::npos);

  meta.topics = {{"x"}, {"x"}, {"x"}};
  EXPECT_EQ(topic_ranking(report, meta, m).topics.size(), 1u);
}

pvae::PVae prior_model(int m) {
  pvae::PVae model = testing::random_model(testing::tiny_config(m), 11);
  auto& head = model.head();
  const int last = head.num_layers() - 1;
  head.weight(last).mutable_value().setZero();
  auto bias = head.bias(last).mutable_value();
  const int k = model.latent_dim();
  for (int d = 0; d < k; ++d) {
    bias(d, 0) = 0.0;
    bias(k + d, 0) = std::log(std::expm1(1.0 - 1e-4));
  }
  return model;
}

TEST(Quality, PriorEmittingModelScoresZero) {
  const auto m = testing::synthetic_matrix(20, 6, 0.6, 12);
  const auto model = prior_model(6);
  for (int j = 0; j < 6; ++j) EXPECT_NEAR(quality(model, m, j, 10, 1), 0.0, 1e-12);
}

TEST(Quality, NonNegativeOverRandomModels) {
  const auto m = testing::synthetic_matrix(20, 6, 0.6, 13);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto model = testing::random_model(testing::tiny_config(6), 100 + s);
    EXPECT_GE(quality(model, m, static_cast<int>(s % 6), 5, s), 0.0);
  }
}

// With S equal to the answer count every answerer is used once, so R is the
// count-weighted mean of the two singleton KLs.
TEST(Quality, ExhaustiveSampleMatchesSingletonMixture) {
  const auto m = testing::synthetic_matrix(50, 6, 0.5, 14);
  const auto model = testing::random_model(testing::tiny_config(6), 15);
  for (int j = 0; j < 6; ++j) {
    const int n = m.column_counts()[j];
    const int n1 = m.column_correct()[j];
    const double kl1 = core::kl_to_standard(model.encode(std::vector<Answer>{{j, 1}}));
    const double kl0 = core::kl_to_standard(model.encode(std::vector<Answer>{{j, 0}}));
    const double expected = (n1 * kl1 + (n - n1) * kl0) / n;
    EXPECT_NEAR(quality(model, m, j, n, 16), expected, 1e-12);
  }
}

TEST(Quality, UnansweredQuestionIsNamed) {
  const auto m = dense({{1, -1}, {0, -1}});
  const auto model = testing::random_model(testing::tiny_config(2), 17);
  try {
    quality(model, m, 1, 5, 0);
    FAIL() << "expected an error";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("q1"), std::string::npos) << e.what();
  }
}

TEST(Quality, ReportSkipsUnansweredAndCapsSamples) {
  const auto m = dense({{1, -1, 0}, {0, -1, 1}, {1, -1, -1}});
  const auto model = testing::random_model(testing::tiny_config(3), 18);
  const auto report = quality_report(model, m, {2, 0, 1});
  EXPECT_EQ(report.question, (std::vector<int>{0, 2}));
  EXPECT_EQ(report.samples, (std::vector<int>{2, 2}));
  std::ostringstream out;
  write_quality_tsv(out, m, report);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "question_id\tR\tentropy\tS");
}

}  // namespace
}  // namespace qinsight::analytics
