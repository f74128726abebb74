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

#include "qinsight/baselines/simple.hpp"

#include "qinsight/core/random.hpp"

namespace qinsight::baselines {

core::Matrix random_impute(int num_students, int num_questions, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  core::Matrix out(num_students, num_questions);
  for (int i = 0; i < num_students; ++i)
    for (int j = 0; j < num_questions; ++j) out(i, j) = core::unit_from_hash(rng());
  return out;
}

std::vector<int> majority_values(const data::AnswerMatrix& matrix, std::span<const int> rows) {
  const auto m = static_cast<std::size_t>(matrix.num_questions());
  std::vector<long> correct(m, 0);
  std::vector<long> count(m, 0);
  const auto visit = [&](int i) {
    for (const auto& a : matrix.row(i)) {
      correct[static_cast<std::size_t>(a.question)] += a.value;
      count[static_cast<std::size_t>(a.question)] += 1;
    }
  };
  if (rows.empty()) {
    for (int i = 0; i < matrix.num_students(); ++i) visit(i);
  } else {
    for (int i : rows) visit(i);
  }
  long total_correct = 0;
  long total = 0;
  for (std::size_t j = 0; j < m; ++j) {
    total_correct += correct[j];
    total += count[j];
  }
  const int global = 2 * total_correct >= total ? 1 : 0;
  std::vector<int> out(m, global);
  for (std::size_t j = 0; j < m; ++j) {
    if (2 * correct[j] > count[j]) out[j] = 1;
    else if (2 * correct[j] < count[j]) out[j] = 0;
  }
  return out;
}

data::AnswerMatrix majority_impute(const data::AnswerMatrix& matrix) {
  const auto majority = majority_values(matrix);
  std::vector<std::vector<data::Answer>> rows(static_cast<std::size_t>(matrix.num_students()));
  for (int i = 0; i < matrix.num_students(); ++i) {
    const auto observed = matrix.row(i);
    auto& row = rows[static_cast<std::size_t>(i)];
    std::size_t k = 0;
    for (int j = 0; j < matrix.num_questions(); ++j) {
      if (k < observed.size() && observed[k].question == j) {
        row.push_back(observed[k++]);
      } else {
        row.push_back({j, majority[static_cast<std::size_t>(j)]});
      }
    }
  }
  return data::AnswerMatrix(matrix.student_ids(), matrix.question_ids(), std::move(rows));
}

std::vector<double> RandomImputer::predict(std::span<const data::Answer>, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::vector<double> out(static_cast<std::size_t>(num_questions_));
  for (auto& v : out) v = core::unit_from_hash(rng());
  return out;
}

std::vector<double> MajorityImputer::predict(std::span<const data::Answer>, std::uint64_t) const {
  return std::vector<double>(majority_.begin(), majority_.end());
}

}  // namespace qinsight::baselines
