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

#include "qinsight/data/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>

#include "qinsight/core/error.hpp"

namespace qinsight::data {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

template <typename T>
std::optional<T> parse_number(const std::string& s) {
  T v{};
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

IngestResult ingest_csv(std::istream& in, const CsvSchema& schema) {
  std::string line;
  if (!next_line(in, line)) throw DataError("ingest_csv: empty input, header row missing");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line = line.substr(3);  // UTF-8 BOM
  const auto header = split_fields(line, ',');
  const auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto student_col = column(schema.student_column);
  const auto question_col = column(schema.question_column);
  const auto correct_col = column(schema.correct_column);
  const auto time_col = column(schema.timestamp_column);
  for (const auto& [col, name] : {std::pair{student_col, schema.student_column},
                                  std::pair{question_col, schema.question_column},
                                  std::pair{correct_col, schema.correct_column}}) {
    if (!col) throw DataError("ingest_csv: required column '" + name + "' missing from header");
  }

  IngestResult result;
  std::size_t line_no = 1;
  const auto skip = [&](const std::string& why) {
    ++result.skipped;
    if (result.warnings.size() < 20) result.warnings.push_back("line " + std::to_string(line_no) + ": " + why);
  };
  while (next_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++result.data_rows;
    const auto fields = split_fields(line, ',');
    if (fields.size() != header.size()) {
      skip("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
      continue;
    }
    AnswerRecord rec;
    rec.student_id = fields[*student_col];
    rec.question_id = fields[*question_col];
    if (rec.student_id.empty() || rec.question_id.empty()) {
      skip("empty student or question id");
      continue;
    }
    const auto correct = parse_number<int>(fields[*correct_col]);
    if (!correct || (*correct != 0 && *correct != 1)) {
      skip("is_correct must be 0 or 1, got '" + fields[*correct_col] + "'");
      continue;
    }
    rec.is_correct = *correct;
    if (time_col && !fields[*time_col].empty()) {
      const auto ts = parse_number<std::int64_t>(fields[*time_col]);
      if (!ts) {
        skip("unparsable timestamp '" + fields[*time_col] + "'");
        continue;
      }
      rec.timestamp = *ts;
    }
    result.records.push_back(std::move(rec));
  }
  if (result.data_rows > 0 &&
      static_cast<double>(result.skipped) > schema.max_skipped_fraction * static_cast<double>(result.data_rows)) {
    throw DataError("ingest_csv: skipped " + std::to_string(result.skipped) + " of " +
                    std::to_string(result.data_rows) + " rows, above the tolerated fraction");
  }
  if (result.skipped > result.warnings.size())
    result.warnings.push_back("... " + std::to_string(result.skipped - result.warnings.size()) +
                              " more skipped rows");
  return result;
}

IngestResult ingest_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("ingest_csv: cannot open '" + path.string() + "'");
  return ingest_csv(in, schema);
}

void write_answers_csv(std::ostream& out, const AnswerMatrix& matrix) {
  out << "student_id,question_id,is_correct\n";
  for (int i = 0; i < matrix.num_students(); ++i)
    for (const Answer& a : matrix.row(i))
      out << matrix.student_id(i) << ',' << matrix.question_id(a.question) << ',' << a.value << '\n';
}

void write_matrix(std::ostream& out, const AnswerMatrix& matrix) {
  for (int i = 0; i < matrix.num_students(); ++i) {
    out << matrix.student_id(i) << '\t';
    bool first = true;
    for (const Answer& a : matrix.row(i)) {
      if (!first) out << ',';
      out << matrix.question_id(a.question) << ':' << a.value;
      first = false;
    }
    out << '\n';
  }
}

AnswerMatrix read_matrix(std::istream& in) {
  std::vector<std::string> students;
  std::vector<std::vector<std::pair<std::string, int>>> raw;
  std::set<std::string> questions;
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw DataError("read_matrix: line " + std::to_string(line_no) + " has no tab");
    students.push_back(line.substr(0, tab));
    auto& cells = raw.emplace_back();
    const std::string rest = line.substr(tab + 1);
    if (rest.empty()) continue;
    for (const auto& cell : split_fields(rest, ',')) {
      const auto colon = cell.rfind(':');
      const auto v = colon == std::string::npos ? std::nullopt : parse_number<int>(cell.substr(colon + 1));
      if (!v || (*v != 0 && *v != 1))
        throw DataError("read_matrix: bad cell '" + cell + "' on line " + std::to_string(line_no));
      cells.emplace_back(cell.substr(0, colon), *v);
      questions.insert(cell.substr(0, colon));
    }
  }
  std::vector<std::string> qids(questions.begin(), questions.end());
  std::vector<std::vector<Answer>> rows;
  rows.reserve(raw.size());
  for (const auto& cells : raw) {
    auto& row = rows.emplace_back();
    for (const auto& [qid, v] : cells) {
      const auto it = std::lower_bound(qids.begin(), qids.end(), qid);
      row.push_back({static_cast<int>(it - qids.begin()), v});
    }
    std::sort(row.begin(), row.end(), [](const Answer& a, const Answer& b) { return a.question < b.question; });
  }
  return AnswerMatrix(std::move(students), std::move(qids), std::move(rows));
}

std::map<std::string, std::vector<std::string>> read_topics_csv(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw DataError("read_topics_csv: empty input");
  const auto header = split_fields(line, ',');
  if (header.size() < 2 || header[0] != "question_id" || header[1] != "topics")
    throw DataError("read_topics_csv: header must be 'question_id,topics'");
  std::map<std::string, std::vector<std::string>> out;
  while (next_line(in, line)) {
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DataError("read_topics_csv: malformed line '" + line + "'");
    std::vector<std::string> topics;
    for (auto& t : split_fields(line.substr(comma + 1), '|'))
      if (!t.empty()) topics.push_back(std::move(t));
    out[trim(line.substr(0, comma))] = std::move(topics);
  }
  return out;
}

std::map<std::string, std::vector<std::string>> read_topics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("read_topics_csv: cannot open '" + path.string() + "'");
  return read_topics_csv(in);
}

QuestionMeta align_meta(const AnswerMatrix& matrix, const std::map<std::string, std::vector<std::string>>& topics) {
  QuestionMeta meta;
  meta.topics.resize(static_cast<std::size_t>(matrix.num_questions()));
  for (int j = 0; j < matrix.num_questions(); ++j) {
    auto it = topics.find(matrix.question_id(j));
    if (it != topics.end()) meta.topics[static_cast<std::size_t>(j)] = it->second;
  }
  return meta;
}

void write_topics_csv(std::ostream& out, const AnswerMatrix& matrix, const QuestionMeta& meta) {
  out << "question_id,topics\n";
  for (int j = 0; j < matrix.num_questions(); ++j) {
    out << matrix.question_id(j) << ',';
    const auto& ts = meta.topics.at(static_cast<std::size_t>(j));
    for (std::size_t k = 0; k < ts.size(); ++k) out << (k ? "|" : "") << ts[k];
    out << '\n';
  }
}

}  // namespace qinsight::data
