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
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qinsight/data/answers.hpp"
#include "qinsight/selection/session.hpp"

namespace qinsight::selection {

struct RandSequence {
  std::vector<int> sequence;
  bool short_pool = false;  // fewer candidates than requested steps
};

// Seeded uniform sample of `steps` candidates without replacement.
RandSequence rand_strategy(std::span<const int> candidates, int steps, std::uint64_t seed);

struct PopulationMember {
  int student = -1;
  const AnswerOracle* oracle = nullptr;
  std::vector<Answer> targets;
};

struct SingResult {
  std::vector<int> sequence;
  std::vector<SelectionSession> sessions;  // one per member, same order
  bool terminated_early = false;
};

/// One question sequence for a whole population. At each step a candidate's
/// reward is the mean information reward over the members that could
/// answer it (not a target, answer available), each conditioned on its own
/// revealed answers. Members then reveal their own answer to the chosen
/// question.
SingResult sing_strategy(const RewardEngine& engine, std::span<const PopulationMember> population,
                         const StrategyConfig& config, const TargetPredictor& predictor = {}, int threads = 1);

enum class Strategy { kOurs, kRand, kSing };

std::string strategy_name(Strategy s);
// Accepts "ours", "rand", "sing"; throws ConfigError otherwise.
Strategy parse_strategy(const std::string& name);

struct EvaluationConfig {
  StrategyConfig session;
  int runs = 10;
  int students_per_run = 100;
  double target_fraction = 0.1;
  std::vector<Strategy> strategies{Strategy::kOurs, Strategy::kRand, Strategy::kSing};
  int threads = 1;

  void validate() const;
};

struct StrategyCurve {
  Strategy strategy = Strategy::kOurs;
  std::vector<double> mean_mae;    // index k holds step k + 1
  std::vector<double> stderr_mae;  // standard error over runs x students
  std::size_t sessions = 0;
  std::size_t early_stops = 0;
};

// Builds the answer source for a student from its logged row.
using OracleFactory = std::function<std::unique_ptr<AnswerOracle>(int student, std::span<const Answer> row)>;

/// For each run, samples students from `test_students`, holds out targets and
/// runs every strategy; returns per-step MAE statistics, one curve per
/// strategy in config order. Defaults: replay oracle, model predictions.
std::vector<StrategyCurve> evaluate_strategies(const pvae::PVae& model, const data::AnswerMatrix& matrix,
                                               std::span<const int> test_students, const EvaluationConfig& config,
                                               const OracleFactory& oracles = {},
                                               const TargetPredictor& predictor = {});

void write_session_log(std::ostream& out, const SelectionSession& session,
                       std::span<const std::string> question_ids);
void write_strategy_comparison(std::ostream& out, std::span<const StrategyCurve> curves);

}  // namespace qinsight::selection
