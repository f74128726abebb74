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

#include "qinsight/data/answers.hpp"

namespace qinsight::data {

struct PreprocessOptions {
  int min_answers_per_question = 50;
  int min_answers_per_student = 50;
};

// Keeps one record per (student, question): the largest timestamp, or the
// last occurrence in input order when timestamps tie or are absent.
std::vector<AnswerRecord> deduplicate(std::span<const AnswerRecord> records);

/// Deduplicates, then alternately drops questions and students below their
/// answer thresholds until neither pass removes anything. Ids are indexed in
/// sorted order. Throws DataError if nothing survives.
AnswerMatrix preprocess(std::span<const AnswerRecord> records, const PreprocessOptions& options = {});

}  // namespace qinsight::data
