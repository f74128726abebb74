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
#include <span>
#include <string>
#include <vector>

#include "qinsight/data/answers.hpp"
#include "qinsight/pvae/model.hpp"

namespace qinsight::pvae {

// Predicts P(x_j = 1) for every question from one student's conditioning set.
class Imputer {
 public:
  virtual ~Imputer() = default;
  virtual std::vector<double> predict(std::span<const data::Answer> conditioning, std::uint64_t seed) const = 0;
};

class PVaeImputer : public Imputer {
 public:
  explicit PVaeImputer(const PVae& model, int samples = 50) : model_(model), samples_(samples) {}
  std::vector<double> predict(std::span<const data::Answer> conditioning, std::uint64_t seed) const override;

 private:
  const PVae& model_;
  int samples_;
};

struct ImputationScore {
  double accuracy = 0.0;
  double mae = 0.0;
  std::size_t num_targets = 0;
  std::size_t num_students = 0;
  std::size_t skipped_students = 0;  // rows with nothing to hold out
};

/// For each listed student, conditions on a seeded `conditioning_fraction`
/// of the observed row and scores the remaining answers: accuracy of
/// (p >= threshold) against x, and mean |p - x|, both pooled over targets.
ImputationScore evaluate_imputation(const Imputer& imputer, const data::AnswerMatrix& matrix,
                                    std::span<const int> students, double conditioning_fraction, std::uint64_t seed,
                                    double threshold = 0.5, int threads = 1);

// Accuracy/MAE of given predictions against labels; the building block above.
ImputationScore score_predictions(std::span<const double> predictions, std::span<const int> labels,
                                  double threshold = 0.5);

}  // namespace qinsight::pvae
