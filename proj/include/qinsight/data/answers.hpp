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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qinsight::data {

// One observed (question, correctness) cell of a student's row.
struct Answer {
  int question = 0;
  int value = 0;  // 0 wrong, 1 correct

  friend bool operator==(const Answer&, const Answer&) = default;
};

// A raw answer log line.
struct AnswerRecord {
  std::string student_id;
  std::string question_id;
  int is_correct = 0;
  std::optional<std::int64_t> timestamp;
};

/// Sparse student x question matrix of binary answers.
///
/// Each row holds that student's observed answers sorted by question index
/// with no duplicates. Rows may be empty (synthetic draws can leave a student
/// unobserved); `preprocess` never produces empty rows.
class AnswerMatrix {
 public:
  AnswerMatrix(std::vector<std::string> student_ids, std::vector<std::string> question_ids,
               std::vector<std::vector<Answer>> rows);

  int num_students() const { return static_cast<int>(rows_.size()); }
  int num_questions() const { return static_cast<int>(question_ids_.size()); }
  std::size_t num_observed() const { return num_observed_; }

  std::span<const Answer> row(int student) const { return rows_.at(static_cast<std::size_t>(student)); }

  const std::string& student_id(int i) const { return student_ids_.at(static_cast<std::size_t>(i)); }
  const std::string& question_id(int j) const { return question_ids_.at(static_cast<std::size_t>(j)); }
  const std::vector<std::string>& student_ids() const { return student_ids_; }
  const std::vector<std::string>& question_ids() const { return question_ids_; }
  std::optional<int> student_index(std::string_view id) const;
  std::optional<int> question_index(std::string_view id) const;

  // Looks up x_ij; nullopt when unobserved.
  std::optional<int> value(int student, int question) const;

  std::vector<int> column_counts() const;
  std::vector<int> column_correct() const;

  friend bool operator==(const AnswerMatrix& a, const AnswerMatrix& b) {
    return a.student_ids_ == b.student_ids_ && a.question_ids_ == b.question_ids_ && a.rows_ == b.rows_;
  }

 private:
  std::vector<std::string> student_ids_;
  std::vector<std::string> question_ids_;
  std::vector<std::vector<Answer>> rows_;
  std::unordered_map<std::string, int> student_lookup_;
  std::unordered_map<std::string, int> question_lookup_;
  std::size_t num_observed_ = 0;
};

// Topic labels per question index.
struct QuestionMeta {
  std::vector<std::vector<std::string>> topics;
};

// Validates that a conditioning set has in-range, unique question indices and
// binary values. Returns a copy sorted by question index.
std::vector<Answer> canonical_answers(std::span<const Answer> answers, int num_questions);

}  // namespace qinsight::data
