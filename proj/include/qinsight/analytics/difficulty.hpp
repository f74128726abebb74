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
#include <string>
#include <vector>

#include "qinsight/data/answers.hpp"
#include "qinsight/pvae/model.hpp"

namespace qinsight::analytics {

/// Per-question easiness (mean correctness over every student, observed or
/// imputed) and difficulty = 1 - easiness.
struct DifficultyReport {
  std::vector<double> easiness;
  std::vector<double> difficulty;
  std::vector<int> n_observed;
  std::vector<int> n_imputed;
};

struct DifficultyOptions {
  int samples = 50;  // posterior draws per student
  std::uint64_t seed = 0;
  int threads = 1;
};

// Completes the matrix with p-VAE imputations (each student conditioned on
// their full observed row) and takes column means.
DifficultyReport difficulty(const pvae::PVae& model, const data::AnswerMatrix& matrix,
                            const DifficultyOptions& options = {});

enum class DifficultyScheme { kRandom, kMajorityImpute, kObservedOnly };

DifficultyReport difficulty_baseline(const data::AnswerMatrix& matrix, DifficultyScheme scheme, std::uint64_t seed = 0);

struct TopicScore {
  std::string topic;
  double mean_difficulty = 0.0;
  int num_questions = 0;
};

struct TopicRanking {
  std::vector<TopicScore> topics;  // hardest first; ties by label
  std::vector<std::string> warnings;
};

TopicRanking topic_ranking(const DifficultyReport& report, const data::QuestionMeta& meta,
                           const data::AnswerMatrix& matrix);

}  // namespace qinsight::analytics
