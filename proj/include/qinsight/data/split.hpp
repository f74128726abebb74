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

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qinsight/data/answers.hpp"

namespace qinsight::data {

// Disjoint train/validation/test student index sets, each sorted.
struct StudentSplit {
  std::vector<int> train;
  std::vector<int> validation;
  std::vector<int> test;
};

struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

// Seeded shuffle of [0, num_students) partitioned by `ratios`. The validation
// and test sizes are rounded; train takes the remainder.
StudentSplit split_students(int num_students, const SplitRatios& ratios, std::uint64_t seed);
inline StudentSplit split_students(const AnswerMatrix& m, const SplitRatios& ratios, std::uint64_t seed) {
  return split_students(m.num_students(), ratios, seed);
}

struct HeldOut {
  std::vector<Answer> conditioning;
  std::vector<Answer> targets;
};

// Seeded partition of one row; |targets| = max(1, round(fraction * |row|)).
HeldOut hold_out_targets(std::span<const Answer> row, double fraction, std::uint64_t seed);

}  // namespace qinsight::data
