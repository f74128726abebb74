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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "qinsight/core/error.hpp"
#include "qinsight/data/answers.hpp"
#include "qinsight/data/csv_io.hpp"
#include "qinsight/data/preprocess.hpp"
#include "qinsight/data/split.hpp"

namespace qinsight::data {
namespace {

IngestResult ingest(const std::string& text) {
  std::istringstream in(text);
  return ingest_csv(in);
}

std::vector<AnswerRecord> records(std::initializer_list<std::tuple<const char*, const char*, int>> rows) {
  std::vector<AnswerRecord> out;
  for (const auto& [s, q, v] : rows) out.push_back({s, q, v, std::nullopt});
  return out;
}

TEST(Ingest, WellFormedRows) {
  const auto r = ingest("student_id,question_id,is_correct\ns1,q1,1\ns1,q2,0\ns2,q1,1\n");
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_EQ(r.skipped, 0u);
  EXPECT_EQ(r.records[1].question_id, "q2");
  EXPECT_EQ(r.records[1].is_correct, 0);
  EXPECT_FALSE(r.records[0].timestamp.has_value());
}

TEST(Ingest, ColumnOrderFollowsHeader) {
  const auto r = ingest("timestamp,is_correct,question_id,student_id\n7,1,q9,s4\n");
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].student_id, "s4");
  EXPECT_EQ(r.records[0].question_id, "q9");
  EXPECT_EQ(r.records[0].timestamp, 7);
}

TEST(Ingest, NonBinaryRowSkippedWithWarning) {
  std::string text = "student_id,question_id,is_correct\ns1,q1,2\n";
  for (int k = 0; k < 150; ++k) text += "s" + std::to_string(k) + ",q1,1\n";
  const auto r = ingest(text);
  EXPECT_EQ(r.records.size(), 150u);
  EXPECT_EQ(r.skipped, 1u);
  ASSERT_FALSE(r.warnings.empty());
}

TEST(Ingest, TooManySkippedRowsIsFatal) {
  EXPECT_THROW(ingest("student_id,question_id,is_correct\ns1,q1,1\ns1,q2,x\n"), DataError);
}

TEST(Ingest, MissingColumnIsFatal) {
  EXPECT_THROW(ingest("student_id,question,is_correct\ns1,q1,1\n"), DataError);
  EXPECT_THROW(ingest(""), DataError);
}

TEST(Preprocess, LatestTimestampWins) {
  auto r = ingest("student_id,question_id,is_correct,timestamp\ns1,q1,0,5\ns1,q1,1,9\n");
  auto m = preprocess(r.records, {0, 0});
  EXPECT_EQ(m.value(0, 0), 1);
  r = ingest("student_id,question_id,is_correct,timestamp\ns1,q1,1,9\ns1,q1,0,5\n");
  m = preprocess(r.records, {0, 0});
  EXPECT_EQ(m.value(0, 0), 1);
}

TEST(Preprocess, FileOrderWithoutTimestamps) {
  const auto m = preprocess(records({{"s1", "q1", 1}, {"s1", "q1", 0}}), {0, 0});
  EXPECT_EQ(m.value(0, 0), 0);
  EXPECT_EQ(m.num_observed(), 1u);
}

TEST(Preprocess, ZeroThresholdsKeepEverything) {
  const auto m = preprocess(records({{"b", "y", 1}, {"a", "x", 0}, {"a", "y", 1}}), {0, 0});
  EXPECT_EQ(m.num_students(), 2);
  EXPECT_EQ(m.num_questions(), 2);
  EXPECT_EQ(m.num_observed(), 3u);
  // ids are indexed in sorted order
  EXPECT_EQ(m.student_id(0), "a");
  EXPECT_EQ(m.question_id(1), "y");
}

TEST(Preprocess, QuestionBelowThresholdDropped) {
  std::vector<AnswerRecord> recs;
  for (int i = 0; i < 60; ++i) {
    const std::string s = "s" + std::to_string(i);
    recs.push_back({s, "popular", 1, std::nullopt});
    if (i < 49) recs.push_back({s, "rare", 0, std::nullopt});
  }
  const auto m = preprocess(recs, {50, 1});
  EXPECT_EQ(m.num_questions(), 1);
  EXPECT_EQ(m.question_id(0), "popular");
}

// Thresholds (2, 2). Hand trace:
//   q4 has 1 answer -> dropped; C (only q3) and D (only q1 left) fall below 2
//   -> dropped; q3 is left with A only -> dropped; A and B keep q1, q2.
// A single pass would have stopped with q3 still present.
TEST(Preprocess, CascadeReachesFixedPoint) {
  const auto recs = records({{"A", "q1", 1},
                             {"A", "q2", 0},
                             {"A", "q3", 1},
                             {"B", "q1", 0},
                             {"B", "q2", 1},
                             {"C", "q3", 1},
                             {"D", "q4", 0},
                             {"D", "q1", 1}});
  const auto m = preprocess(recs, {2, 2});
  EXPECT_EQ(m.student_ids(), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(m.question_ids(), (std::vector<std::string>{"q1", "q2"}));
  for (int c : m.column_counts()) EXPECT_GE(c, 2);
  for (int i = 0; i < m.num_students(); ++i) EXPECT_GE(m.row(i).size(), 2u);
}

TEST(Preprocess, EmptyResultIsFatal) {
  EXPECT_THROW(preprocess(records({{"a", "x", 1}}), {2, 0}), DataError);
  EXPECT_THROW(preprocess(records({{"a", "x", 1}}), {-1, 0}), ConfigError);
}

TEST(Serialization, CsvRoundTrip) {
  const auto original = preprocess(
      records({{"s2", "q1", 1}, {"s1", "q1", 0}, {"s1", "q3", 1}, {"s3", "q2", 0}, {"s2", "q2", 1}}), {0, 0});
  std::stringstream csv;
  write_answers_csv(csv, original);
  const auto again = preprocess(ingest_csv(csv).records, {0, 0});
  EXPECT_EQ(again, original);
}

TEST(Serialization, MatrixTextRoundTrip) {
  const auto original = preprocess(records({{"s1", "q1", 0}, {"s1", "q3", 1}, {"s2", "q2", 1}}), {0, 0});
  std::stringstream text;
  write_matrix(text, original);
  EXPECT_EQ(text.str(), "s1\tq1:0,q3:1\ns2\tq2:1\n");
  EXPECT_EQ(read_matrix(text), original);
}

TEST(Topics, ReadAndAlign) {
  std::istringstream in("question_id,topics\nq1,algebra|fractions\nq2,geometry\n");
  const auto topics = read_topics_csv(in);
  const auto m = preprocess(records({{"s", "q1", 1}, {"s", "q2", 1}}), {0, 0});
  const auto meta = align_meta(m, topics);
  EXPECT_EQ(meta.topics[0], (std::vector<std::string>{"algebra", "fractions"}));
  EXPECT_EQ(meta.topics[1], (std::vector<std::string>{"geometry"}));
}

TEST(AnswerMatrixInvariants, RejectsMalformedRows) {
  auto make = [](std::vector<Answer> row) { return AnswerMatrix({"s"}, {"a", "b"}, {std::move(row)}); };
  EXPECT_NO_THROW(make({{0, 1}, {1, 0}}));
  EXPECT_THROW(make({{1, 1}, {0, 0}}), ConfigError);
  EXPECT_THROW(make({{0, 1}, {0, 0}}), ConfigError);
  EXPECT_THROW(make({{2, 1}}), ConfigError);
  EXPECT_THROW(make({{0, 2}}), ConfigError);
  EXPECT_THROW(AnswerMatrix({}, {"a"}, {}), ConfigError);
}

TEST(Split, TenStudents) {
  const auto s = split_students(10, {}, 3);
  EXPECT_EQ(s.train.size(), 8u);
  EXPECT_EQ(s.validation.size(), 1u);
  EXPECT_EQ(s.test.size(), 1u);
}

TEST(Split, SeedDeterminesSplit) {
  const auto a = split_students(50, {}, 9);
  const auto b = split_students(50, {}, 9);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_NE(a.train, split_students(50, {}, 10).train);
}

TEST(Split, IsPartitionWithRequestedSizes) {
  const auto s = split_students(100, {0.5, 0.25, 0.25}, 1);
  EXPECT_EQ(s.train.size(), 50u);
  EXPECT_EQ(s.validation.size(), 25u);
  EXPECT_EQ(s.test.size(), 25u);
  std::set<int> all;
  for (const auto* part : {&s.train, &s.validation, &s.test}) all.insert(part->begin(), part->end());
  EXPECT_EQ(all.size(), 100u);
  EXPECT_EQ(*all.begin(), 0);
  EXPECT_EQ(*all.rbegin(), 99);
}

TEST(Split, RejectsBadRatiosAndEmptyParts) {
  EXPECT_THROW(split_students(10, {0.8, 0.3, 0.1}, 0), ConfigError);
  EXPECT_THROW(split_students(10, {1.0, 0.0, 0.0}, 0), ConfigError);
  EXPECT_THROW(split_students(3, {}, 0), ConfigError);
}

std::vector<Answer> row_of(int n) {
  std::vector<Answer> row;
  for (int j = 0; j < n; ++j) row.push_back({j, j % 2});
  return row;
}

TEST(HoldOut, TenPercentOfTwenty) {
  const auto h = hold_out_targets(row_of(20), 0.1, 4);
  EXPECT_EQ(h.targets.size(), 2u);
  EXPECT_EQ(h.conditioning.size(), 18u);
}

TEST(HoldOut, HalfOfTwo) {
  const auto h = hold_out_targets(row_of(2), 0.5, 4);
  EXPECT_EQ(h.targets.size(), 1u);
  EXPECT_EQ(h.conditioning.size(), 1u);
}

TEST(HoldOut, SingleEntryBecomesTarget) {
  const auto h = hold_out_targets(row_of(1), 0.1, 4);
  EXPECT_EQ(h.targets.size(), 1u);
  EXPECT_TRUE(h.conditioning.empty());
}

TEST(HoldOut, PartitionsTheRow) {
  const auto row = row_of(37);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto h = hold_out_targets(row, 0.3, seed);
    std::vector<Answer> all = h.conditioning;
    all.insert(all.end(), h.targets.begin(), h.targets.end());
    std::sort(all.begin(), all.end(), [](const Answer& a, const Answer& b) { return a.question < b.question; });
    EXPECT_EQ(all, row);
    EXPECT_EQ(h.targets.size(), 11u);
  }
  EXPECT_EQ(hold_out_targets(row, 0.3, 1).targets, hold_out_targets(row, 0.3, 1).targets);
}

TEST(HoldOut, RejectsBadInput) {
  EXPECT_THROW(hold_out_targets(row_of(5), 0.0, 1), ConfigError);
  EXPECT_THROW(hold_out_targets(row_of(5), 1.0, 1), ConfigError);
  EXPECT_THROW(hold_out_targets({}, 0.5, 1), ConfigError);
}

}  // namespace
}  // namespace qinsight::data
