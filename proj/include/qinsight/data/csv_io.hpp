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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qinsight/data/answers.hpp"

namespace qinsight::data {

// Column names for answer-log CSVs. The timestamp column is optional.
struct CsvSchema {
  std::string student_column = "student_id";
  std::string question_column = "question_id";
  std::string correct_column = "is_correct";
  std::string timestamp_column = "timestamp";
  // Largest tolerated fraction of skipped data rows before ingestion fails.
  double max_skipped_fraction = 0.01;
};

struct IngestResult {
  std::vector<AnswerRecord> records;
  std::size_t data_rows = 0;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

IngestResult ingest_csv(std::istream& in, const CsvSchema& schema = {});
IngestResult ingest_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

void write_answers_csv(std::ostream& out, const AnswerMatrix& matrix);

// Line-oriented form: `student_id<TAB>q:v,q:v,...` using question ids.
void write_matrix(std::ostream& out, const AnswerMatrix& matrix);
// Students keep file order; question ids are indexed in sorted order.
AnswerMatrix read_matrix(std::istream& in);

// `question_id,topics` with `|`-separated topic labels.
std::map<std::string, std::vector<std::string>> read_topics_csv(std::istream& in);
std::map<std::string, std::vector<std::string>> read_topics_csv(const std::filesystem::path& path);
QuestionMeta align_meta(const AnswerMatrix& matrix, const std::map<std::string, std::vector<std::string>>& topics);
void write_topics_csv(std::ostream& out, const AnswerMatrix& matrix, const QuestionMeta& meta);

// Splits on `sep`, trimming surrounding whitespace and one layer of quotes.
std::vector<std::string> split_fields(const std::string& line, char sep);

}  // namespace qinsight::data
