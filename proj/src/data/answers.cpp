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

#include "qinsight/data/answers.hpp"

#include <algorithm>

#include "qinsight/core/error.hpp"

namespace qinsight::data {

AnswerMatrix::AnswerMatrix(std::vector<std::string> student_ids, std::vector<std::string> question_ids,
                           std::vector<std::vector<Answer>> rows)
    : student_ids_(std::move(student_ids)), question_ids_(std::move(question_ids)), rows_(std::move(rows)) {
  if (student_ids_.empty() || question_ids_.empty())
    throw ConfigError("AnswerMatrix: needs at least one student and one question");
  if (student_ids_.size() != rows_.size())
    throw ConfigError("AnswerMatrix: " + std::to_string(student_ids_.size()) + " student ids for " +
                      std::to_string(rows_.size()) + " rows");
  const int m = num_questions();
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& row = rows_[i];
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k].question < 0 || row[k].question >= m)
        throw ConfigError("AnswerMatrix: question index out of range in row " + std::to_string(i));
      if (row[k].value != 0 && row[k].value != 1)
        throw ConfigError("AnswerMatrix: non-binary value in row " + std::to_string(i));
      if (k > 0 && row[k].question <= row[k - 1].question)
        throw ConfigError("AnswerMatrix: row " + std::to_string(i) + " not strictly increasing");
    }
    num_observed_ += row.size();
  }
  for (std::size_t i = 0; i < student_ids_.size(); ++i)
    if (!student_lookup_.emplace(student_ids_[i], static_cast<int>(i)).second)
      throw ConfigError("AnswerMatrix: duplicate student id '" + student_ids_[i] + "'");
  for (std::size_t j = 0; j < question_ids_.size(); ++j)
    if (!question_lookup_.emplace(question_ids_[j], static_cast<int>(j)).second)
      throw ConfigError("AnswerMatrix: duplicate question id '" + question_ids_[j] + "'");
}

std::optional<int> AnswerMatrix::student_index(std::string_view id) const {
  auto it = student_lookup_.find(std::string(id));
  if (it == student_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> AnswerMatrix::question_index(std::string_view id) const {
  auto it = question_lookup_.find(std::string(id));
  if (it == question_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> AnswerMatrix::value(int student, int question) const {
  const auto r = row(student);
  auto it = std::lower_bound(r.begin(), r.end(), question,
                             [](const Answer& a, int q) { return a.question < q; });
  if (it == r.end() || it->question != question) return std::nullopt;
  return it->value;
}

std::vector<int> AnswerMatrix::column_counts() const {
  std::vector<int> counts(static_cast<std::size_t>(num_questions()), 0);
  for (const auto& row : rows_)
    for (const Answer& a : row) ++counts[static_cast<std::size_t>(a.question)];
  return counts;
}

std::vector<int> AnswerMatrix::column_correct() const {
  std::vector<int> counts(static_cast<std::size_t>(num_questions()), 0);
  for (const auto& row : rows_)
    for (const Answer& a : row) counts[static_cast<std::size_t>(a.question)] += a.value;
  return counts;
}

std::vector<Answer> canonical_answers(std::span<const Answer> answers, int num_questions) {
  std::vector<Answer> out(answers.begin(), answers.end());
  std::sort(out.begin(), out.end(), [](const Answer& a, const Answer& b) { return a.question < b.question; });
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (out[k].question < 0 || out[k].question >= num_questions)
      throw ConfigError("question index " + std::to_string(out[k].question) + " out of range");
    if (out[k].value != 0 && out[k].value != 1) throw ConfigError("answer value must be 0 or 1");
    if (k > 0 && out[k].question == out[k - 1].question)
      throw ConfigError("duplicate question index " + std::to_string(out[k].question) + " in conditioning set");
  }
  return out;
}

}  // namespace qinsight::data
