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

#include "qinsight/data/answers.hpp"
#include "qinsight/data/split.hpp"
#include "qinsight/pvae/model.hpp"
#include "qinsight/synth/irt_synth.hpp"

namespace qinsight::testing {

// Small dims so finite-difference checks stay cheap.
pvae::ModelConfig tiny_config(int num_questions);

pvae::PVae random_model(const pvae::ModelConfig& config, std::uint64_t seed);

// Seeded MCAR 2PL matrix.
data::AnswerMatrix synthetic_matrix(int students, int questions, double density, std::uint64_t seed);

// A model trained once per process on a small synthetic 2PL set.
struct TrainedFixture {
  synth::IrtGroundTruth truth;
  data::AnswerMatrix matrix;
  data::StudentSplit split;
  pvae::PVae model;
};
const TrainedFixture& trained_fixture();

// Answers of a student with ability `theta` to `questions`, drawn from the
// fixture's 2PL truth.
std::vector<data::Answer> simulated_answers(const synth::IrtGroundTruth& truth, double theta,
                                            std::span<const int> questions, std::uint64_t seed);

}  // namespace qinsight::testing
