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
#include <numeric>
#include <sstream>

#include "qinsight/analytics/difficulty.hpp"
#include "qinsight/analytics/spearman.hpp"
#include "qinsight/core/error.hpp"
#include "qinsight/synth/irt_synth.hpp"

namespace qinsight::synth {
namespace {

TEST(GroundTruth, SeedReproducible) {
  const auto a = generate_ground_truth(50, 20, 3);
  const auto b = generate_ground_truth(50, 20, 3);
  EXPECT_EQ(a.ability, b.ability);
  EXPECT_EQ(a.difficulty, b.difficulty);
  EXPECT_EQ(a.discrimination, b.discrimination);
  EXPECT_NE(a.ability, generate_ground_truth(50, 20, 4).ability);
}

TEST(GroundTruth, AbilityMeanNearZero) {
  const auto t = generate_ground_truth(1000, 10, 17);
  const double mean = std::accumulate(t.ability.begin(), t.ability.end(), 0.0) / 1000.0;
  EXPECT_LT(std::abs(mean), 0.1);
}

TEST(GroundTruth, DiscriminationsPositive) {
  const auto t = generate_ground_truth(10, 500, 2);
  for (double a : t.discrimination) EXPECT_GT(a, 0.0);
  EXPECT_THROW(generate_ground_truth(1, 5, 0), ConfigError);
}

TEST(AnswerProbability, Values) {
  for (double a : {0.3, 1.0, 4.0}) EXPECT_EQ(answer_probability(0.7, a, 0.7), 0.5);
  EXPECT_GT(answer_probability(60.0, 1.0, 0.0), 1.0 - 1e-15);
  EXPECT_NEAR(answer_probability(1.0, 2.0, 0.0), 0.8807970779778823, 1e-15);
  EXPECT_THROW(answer_probability(0.0, 0.0, 0.0), ConfigError);
}

TEST(Sampling, FullDensityObservesEverything) {
  const auto t = generate_ground_truth(30, 12, 1);
  const auto s = sample_answers(t, {ObservationMode::kMcar, 1.0, 0.5}, 9);
  EXPECT_EQ(s.matrix.num_observed(), 360u);
  for (int i = 0; i < 30; ++i) EXPECT_EQ(s.matrix.row(i).size(), 12u);
}

TEST(Sampling, McarCountConcentrates) {
  const auto t = generate_ground_truth(1000, 1000, 5);
  const auto s = sample_answers(t, {ObservationMode::kMcar, 0.2, 0.5}, 6);
  const double sd = std::sqrt(1e6 * 0.2 * 0.8);
  EXPECT_NEAR(static_cast<double>(s.matrix.num_observed()), 2e5, 3 * sd);
  std::size_t mask_total = 0;
  for (auto v : s.mask) mask_total += v;
  EXPECT_EQ(mask_total, s.matrix.num_observed());
}

TEST(Sampling, BiasedModeKeepsExpectedDensity) {
  const auto t = generate_ground_truth(400, 80, 5);
  const auto p = observation_probabilities(t, {ObservationMode::kAbilityBiased, 0.2, 0.5});
  const double mean = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(p.size());
  EXPECT_NEAR(mean, 0.2, 1e-9);
  // a dense request forces clamping at 1
  const auto dense = observation_probabilities(t, {ObservationMode::kAbilityBiased, 0.9, 0.5});
  EXPECT_NEAR(std::accumulate(dense.begin(), dense.end(), 0.0) / static_cast<double>(dense.size()), 0.9, 1e-9);
  for (double v : dense) EXPECT_LE(v, 1.0);
}

TEST(Sampling, BiasedObservationDegradesObservedRanking) {
  const auto t = generate_ground_truth(2000, 100, 8);
  auto observed_spearman = [&](ObservationMode mode) {
    const auto s = sample_answers(t, {mode, 0.2, 0.5}, 21);
    const auto r = analytics::difficulty_baseline(s.matrix, analytics::DifficultyScheme::kObservedOnly);
    return *analytics::spearman(r.difficulty, t.difficulty);
  };
  EXPECT_LT(observed_spearman(ObservationMode::kAbilityBiased), observed_spearman(ObservationMode::kMcar));
}

TEST(Sampling, EmpiricalRateMatchesMarginal) {
  const auto t = generate_ground_truth(5000, 8, 31);
  const auto s = sample_answers(t, {ObservationMode::kMcar, 1.0, 0.5}, 32);
  const auto correct = s.matrix.column_correct();
  for (int j = 0; j < 8; ++j) {
    // E_theta[sigmoid(a (theta - b))] by Gauss-Hermite-free midpoint quadrature
    double p = 0.0;
    const double h = 0.01;
    for (double th = -8.0; th < 8.0; th += h)
      p += h * std::exp(-0.5 * (th + h / 2) * (th + h / 2)) / std::sqrt(2 * M_PI) *
           answer_probability(th + h / 2, t.discrimination[j], t.difficulty[j]);
    const double se = std::sqrt(p * (1 - p) / 5000.0);
    EXPECT_NEAR(correct[j] / 5000.0, p, 3 * se) << "question " << j;
  }
}

TEST(Sampling, BitIdenticalForSameInputs) {
  const auto t = generate_ground_truth(100, 40, 2);
  const ObservationModel obs{ObservationMode::kAbilityBiased, 0.3, 0.7};
  const auto a = sample_answers(t, obs, 4);
  const auto b = sample_answers(t, obs, 4);
  EXPECT_EQ(a.matrix, b.matrix);
  EXPECT_EQ(a.mask, b.mask);
}

TEST(ObservationModel, Validation) {
  EXPECT_THROW((ObservationModel{ObservationMode::kMcar, 0.0, 0.5}.validate()), ConfigError);
  EXPECT_THROW((ObservationModel{ObservationMode::kMcar, 1.1, 0.5}.validate()), ConfigError);
  EXPECT_THROW((ObservationModel{ObservationMode::kAbilityBiased, 0.2, 0.0}.validate()), ConfigError);
  EXPECT_NO_THROW((ObservationModel{ObservationMode::kMcar, 1.0, 0.5}.validate()));
}

TEST(Ids, PaddedAndSorted) {
  const auto ids = question_ids(120);
  EXPECT_EQ(ids.front(), "q001");
  EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
  EXPECT_EQ(student_ids(2000)[1999], "s2000");
}

TEST(Topics, EveryQuestionTagged) {
  const auto t = generate_ground_truth(10, 50, 1);
  const auto meta = synthetic_topics(t, 5, 2);
  ASSERT_EQ(meta.topics.size(), 50u);
  for (const auto& topics : meta.topics) {
    ASSERT_FALSE(topics.empty());
    EXPECT_LE(topics.size(), 2u);
    if (topics.size() == 2) EXPECT_NE(topics[0], topics[1]);
  }
}

TEST(TruthFiles, RoundTrip) {
  const auto t = generate_ground_truth(5, 4, 3);
  std::stringstream q, s;
  write_question_truth(q, t);
  write_student_truth(s, t);
  const auto questions = read_question_truth(q);
  const auto students = read_student_truth(s);
  ASSERT_EQ(questions.size(), 4u);
  EXPECT_EQ(questions.at("q003").difficulty, t.difficulty[2]);
  EXPECT_EQ(questions.at("q003").discrimination, t.discrimination[2]);
  EXPECT_EQ(students.at("s005"), t.ability[4]);
}

}  // namespace
}  // namespace qinsight::synth
