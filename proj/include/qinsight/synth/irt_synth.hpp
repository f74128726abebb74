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
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qinsight/data/answers.hpp"

namespace qinsight::synth {

// 2PL ground truth: P(correct) = sigmoid(a_j (theta_i - b_j)).
struct IrtGroundTruth {
  std::vector<double> ability;         // theta_i ~ N(0, 1)
  std::vector<double> difficulty;      // b_j ~ N(0, 1)
  std::vector<double> discrimination;  // a_j = exp(0.25 * N(0, 1))
  std::uint64_t seed = 0;

  int num_students() const { return static_cast<int>(ability.size()); }
  int num_questions() const { return static_cast<int>(difficulty.size()); }
};

IrtGroundTruth generate_ground_truth(int num_students, int num_questions, std::uint64_t seed);

double answer_probability(double ability, double discrimination, double difficulty);

enum class ObservationMode { kMcar, kAbilityBiased };

/// Which cells get observed. MCAR observes each cell with probability
/// `density`; ability-biased weights cells by exp(-(theta - b)^2 / (2 tau^2))
/// and rescales so the expected overall density is still `density`.
struct ObservationModel {
  ObservationMode mode = ObservationMode::kMcar;
  double density = 0.2;
  double bandwidth = 0.5;  // tau, biased mode only

  void validate() const;
};

struct SampledAnswers {
  data::AnswerMatrix matrix;
  std::vector<std::uint8_t> mask;  // row-major N x M, 1 = observed

  bool observed(int student, int question) const {
    return mask[static_cast<std::size_t>(student) * static_cast<std::size_t>(matrix.num_questions()) +
                static_cast<std::size_t>(question)] != 0;
  }
};

// Per-cell observation probabilities, row-major N x M.
std::vector<double> observation_probabilities(const IrtGroundTruth& truth, const ObservationModel& obs);

SampledAnswers sample_answers(const IrtGroundTruth& truth, const ObservationModel& obs, std::uint64_t seed);

// Zero-padded ids ("s0001", "q001") so lexicographic and numeric order agree.
std::vector<std::string> student_ids(int n);
std::vector<std::string> question_ids(int m);

// Each question gets the decile topic of its true difficulty, plus a second
// random topic for about a third of questions.
data::QuestionMeta synthetic_topics(const IrtGroundTruth& truth, int num_topics, std::uint64_t seed);

// `question_id<TAB>a<TAB>b` and `student_id<TAB>theta` with a header line.
void write_question_truth(std::ostream& out, const IrtGroundTruth& truth);
void write_student_truth(std::ostream& out, const IrtGroundTruth& truth);

struct QuestionTruth {
  double discrimination = 1.0;
  double difficulty = 0.0;
};
std::map<std::string, QuestionTruth> read_question_truth(std::istream& in);
std::map<std::string, double> read_student_truth(std::istream& in);

}  // namespace qinsight::synth
