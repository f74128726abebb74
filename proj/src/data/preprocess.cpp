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

#include "qinsight/data/preprocess.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "qinsight/core/error.hpp"

namespace qinsight::data {

std::vector<AnswerRecord> deduplicate(std::span<const AnswerRecord> records) {
  // (student, question) -> position of the retained record
  std::map<std::pair<std::string, std::string>, std::size_t> keep;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto key = std::make_pair(records[k].student_id, records[k].question_id);
    auto [it, inserted] = keep.emplace(key, k);
    if (inserted) continue;
    const auto& held = records[it->second].timestamp;
    const auto& cand = records[k].timestamp;
    const bool newer = !held || !cand || *cand >= *held;
    if (newer) it->second = k;
  }
  std::vector<std::size_t> positions;
  positions.reserve(keep.size());
  for (const auto& [key, pos] : keep) positions.push_back(pos);
  std::sort(positions.begin(), positions.end());
  std::vector<AnswerRecord> out;
  out.reserve(positions.size());
  for (std::size_t pos : positions) out.push_back(records[pos]);
  return out;
}

AnswerMatrix preprocess(std::span<const AnswerRecord> records, const PreprocessOptions& options) {
  if (options.min_answers_per_question < 0 || options.min_answers_per_student < 0)
    throw ConfigError("preprocess: thresholds must be non-negative");
  const auto unique = deduplicate(records);

  std::map<std::string, int> student_count;
  std::map<std::string, int> question_count;
  for (const auto& r : unique) {
    ++student_count[r.student_id];
    ++question_count[r.question_id];
  }
  std::vector<bool> alive(unique.size(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::string> dropped_questions;
    for (const auto& [q, c] : question_count)
      if (c < options.min_answers_per_question) dropped_questions.push_back(q);
    for (const auto& q : dropped_questions) question_count.erase(q);
    if (!dropped_questions.empty()) {
      changed = true;
      for (std::size_t k = 0; k < unique.size(); ++k) {
        if (alive[k] && !question_count.contains(unique[k].question_id)) {
          alive[k] = false;
          --student_count[unique[k].student_id];
        }
      }
    }
    std::vector<std::string> dropped_students;
    for (const auto& [s, c] : student_count)
      if (c < options.min_answers_per_student || c == 0) dropped_students.push_back(s);
    for (const auto& s : dropped_students) student_count.erase(s);
    if (!dropped_students.empty()) {
      for (std::size_t k = 0; k < unique.size(); ++k) {
        if (alive[k] && !student_count.contains(unique[k].student_id)) {
          alive[k] = false;
          changed = true;
          --question_count[unique[k].question_id];
        }
      }
    }
  }
  // Questions whose every answer went with dropped students.
  std::erase_if(question_count, [](const auto& kv) { return kv.second == 0; });

  if (student_count.empty() || question_count.empty()) {
    throw DataError("preprocess: no data left after filtering (" + std::to_string(unique.size()) +
                    " unique records, thresholds question>=" + std::to_string(options.min_answers_per_question) +
                    " student>=" + std::to_string(options.min_answers_per_student) + ")");
  }

  std::vector<std::string> sids;
  std::vector<std::string> qids;
  for (const auto& [s, c] : student_count) sids.push_back(s);
  for (const auto& [q, c] : question_count) qids.push_back(q);
  std::map<std::string, int> sidx;
  std::map<std::string, int> qidx;
  for (std::size_t i = 0; i < sids.size(); ++i) sidx[sids[i]] = static_cast<int>(i);
  for (std::size_t j = 0; j < qids.size(); ++j) qidx[qids[j]] = static_cast<int>(j);

  std::vector<std::vector<Answer>> rows(sids.size());
  for (std::size_t k = 0; k < unique.size(); ++k) {
    if (!alive[k]) continue;
    rows[static_cast<std::size_t>(sidx.at(unique[k].student_id))].push_back(
        {qidx.at(unique[k].question_id), unique[k].is_correct});
  }
  for (auto& row : rows)
    std::sort(row.begin(), row.end(), [](const Answer& a, const Answer& b) { return a.question < b.question; });
  return AnswerMatrix(std::move(sids), std::move(qids), std::move(rows));
}

}  // namespace qinsight::data
