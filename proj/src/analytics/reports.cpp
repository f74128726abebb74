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

#include "qinsight/analytics/reports.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace qinsight::analytics {

std::string format_value(double v) {
  if (!std::isfinite(v)) return "NA";
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

std::string format_value(const std::optional<double>& v) { return v ? format_value(*v) : "NA"; }

void write_difficulty_tsv(std::ostream& out, const data::AnswerMatrix& matrix, const DifficultyReport& report) {
  out << "question_id\teasiness\tdifficulty\tn_observed\n";
  for (std::size_t j = 0; j < report.easiness.size(); ++j)
    out << matrix.question_id(static_cast<int>(j)) << '\t' << format_value(report.easiness[j]) << '\t'
        << format_value(report.difficulty[j]) << '\t' << report.n_observed[j] << '\n';
}

void write_quality_tsv(std::ostream& out, const data::AnswerMatrix& matrix, const QualityReport& report) {
  out << "question_id\tR\tentropy\tS\n";
  for (std::size_t k = 0; k < report.question.size(); ++k)
    out << matrix.question_id(report.question[k]) << '\t' << format_value(report.reward[k]) << '\t'
        << format_value(report.entropy[k]) << '\t' << report.samples[k] << '\n';
}

void write_topic_ranking_tsv(std::ostream& out, const TopicRanking& ranking) {
  out << "rank\ttopic\tmean_difficulty\n";
  for (std::size_t k = 0; k < ranking.topics.size(); ++k)
    out << k + 1 << '\t' << ranking.topics[k].topic << '\t' << format_value(ranking.topics[k].mean_difficulty) << '\n';
}

}  // namespace qinsight::analytics
