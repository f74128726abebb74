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

#include <iosfwd>
#include <optional>
#include <string>

#include "qinsight/analytics/difficulty.hpp"
#include "qinsight/analytics/quality.hpp"
#include "qinsight/data/answers.hpp"

namespace qinsight::analytics {

// Fixed 10 significant digits; "NA" for an undefined value.
std::string format_value(double v);
std::string format_value(const std::optional<double>& v);

// question_id  easiness  difficulty  n_observed
void write_difficulty_tsv(std::ostream& out, const data::AnswerMatrix& matrix, const DifficultyReport& report);
// question_id  R  entropy  S
void write_quality_tsv(std::ostream& out, const data::AnswerMatrix& matrix, const QualityReport& report);
// rank  topic  mean_difficulty
void write_topic_ranking_tsv(std::ostream& out, const TopicRanking& ranking);

}  // namespace qinsight::analytics
