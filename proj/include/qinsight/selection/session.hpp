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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qinsight/data/answers.hpp"
#include "qinsight/selection/reward.hpp"
#include "qinsight/synth/irt_synth.hpp"

namespace qinsight::selection {

struct StrategyConfig {
  int steps = 10;
  int reward_samples = 30;  // posterior draws for the predictive p in the reward
  int impute_samples = 50;  // posterior draws for target predictions
  std::uint64_t seed = 0;

  void validate() const;
};

// Source of a student's answers during a session; nullopt when the answer is
// not available.
class AnswerOracle {
 public:
  virtual ~AnswerOracle() = default;
  virtual std::optional<int> answer(int question) const = 0;
};

// Replays logged answers only.
class ReplayOracle : public AnswerOracle {
 public:
  explicit ReplayOracle(std::span<const Answer> row);
  std::optional<int> answer(int question) const override;

 private:
  std::vector<Answer> row_;
};

// Logged answer when there is one, otherwise a Bernoulli draw from the
// generating 2PL model, fixed per (seed, student, question).
class SyntheticOracle : public AnswerOracle {
 public:
  SyntheticOracle(const synth::IrtGroundTruth& truth, int student, std::span<const Answer> logged,
                  std::uint64_t seed);
  std::optional<int> answer(int question) const override;

 private:
  const synth::IrtGroundTruth& truth_;
  int student_;
  std::vector<Answer> logged_;
  std::uint64_t seed_;
};

// Predicted P(correct) for all M questions given a student's revealed answers.
using TargetPredictor =
    std::function<core::Vector(int student, std::span<const Answer> conditioning, std::uint64_t seed)>;

struct StepRecord {
  int question = -1;
  int revealed = 0;
  double reward = 0.0;  // NaN for strategies that do not score candidates
  double target_mae = 0.0;
};

struct SelectionSession {
  int student = -1;
  std::vector<Answer> conditioning;  // revealed answers, in reveal order
  std::vector<Answer> targets;
  double initial_mae = 0.0;  // target MAE before any reveal
  // One record per step; revealed == -1 marks a shared step (SING) on which
  // this student had nothing to reveal.
  std::vector<StepRecord> steps;
  bool terminated_early = false;

  std::vector<int> chosen() const;
  // MAE after each of `steps` reveals, holding the last value after an early stop.
  std::vector<double> mae_curve(int steps) const;
};

// Mean |p - x| over the targets; NaN when there are none.
double target_mae(const core::Vector& predictions, std::span<const Answer> targets);

// Questions neither revealed nor held out as targets.
std::vector<int> candidate_pool(int num_questions, std::span<const Answer> conditioning,
                                std::span<const Answer> targets);

struct RankedCandidate {
  int question;
  double reward;
};

// Candidates by decreasing reward; ties go to the smaller question index.
std::vector<RankedCandidate> rank_candidates(const RewardEngine& engine, std::span<const Answer> conditioning,
                                             std::span<const int> candidates, int samples, std::uint64_t seed);

// Index of the largest reward; ties go to the smaller question index. nullopt
// for an empty pool.
std::optional<int> argmax_candidate(std::span<const int> candidates, std::span<const double> rewards);

// Best candidate for the session's next step (all questions not yet revealed
// and not held out), or nullopt when none remains.
std::optional<int> select_next(const RewardEngine& engine, const SelectionSession& session, int samples,
                               std::uint64_t seed);

// Seeds used at step k (0-based) of a session for `student`.
std::uint64_t reward_seed(std::uint64_t base, int student, int step);
std::uint64_t prediction_seed(std::uint64_t base, int student, int step);

// Default predictor: model.impute with `samples` draws.
TargetPredictor model_predictor(const pvae::PVae& model, int samples);

/// Greedy information-reward acquisition starting from an empty set. Each
/// step asks the highest-reward candidate the oracle can answer; the session
/// stops early when none remains.
SelectionSession run_session(const RewardEngine& engine, const AnswerOracle& oracle, int student,
                             std::vector<Answer> targets, const StrategyConfig& config,
                             const TargetPredictor& predictor = {});

// Reveals questions in the given order, skipping targets, repeats and
// questions the oracle cannot answer, until `config.steps` reveals.
SelectionSession run_fixed_sequence(const pvae::PVae& model, const AnswerOracle& oracle, int student,
                                    std::vector<Answer> targets, std::span<const int> sequence,
                                    const StrategyConfig& config, const TargetPredictor& predictor = {});

}  // namespace qinsight::selection
