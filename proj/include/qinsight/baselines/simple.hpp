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
#include <vector>

#include "qinsight/core/tensor.hpp"
#include "qinsight/data/answers.hpp"
#include "qinsight/pvae/imputation.hpp"

namespace qinsight::baselines {

// Seeded U(0, 1) probability for every cell.
core::Matrix random_impute(int num_students, int num_questions, std::uint64_t seed);

// Per-question majority over the given rows (all rows when empty). Ties and
// unanswered questions take the global majority; a global tie counts as 1.
std::vector<int> majority_values(const data::AnswerMatrix& matrix, std::span<const int> rows = {});

// Fills every missing cell with its question's majority value.
data::AnswerMatrix majority_impute(const data::AnswerMatrix& matrix);

class RandomImputer : public pvae::Imputer {
 public:
  explicit RandomImputer(int num_questions) : num_questions_(num_questions) {}
  std::vector<double> predict(std::span<const data::Answer> conditioning, std::uint64_t seed) const override;

 private:
  int num_questions_;
};

// Predicts the (0/1) majority answer of each question, ignoring the student.
class MajorityImputer : public pvae::Imputer {
 public:
  explicit MajorityImputer(std::vector<int> majority) : majority_(std::move(majority)) {}
  std::vector<double> predict(std::span<const data::Answer> conditioning, std::uint64_t seed) const override;

 private:
  std::vector<int> majority_;
};

}  // namespace qinsight::baselines
