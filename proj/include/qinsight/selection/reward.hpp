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

#include "qinsight/core/gaussian.hpp"
#include "qinsight/data/answers.hpp"
#include "qinsight/pvae/model.hpp"

namespace qinsight::selection {

using data::Answer;

// p * KL[q1 || q] + (1 - p) * KL[q0 || q]: expected divergence of the updated
// posterior from the current one over a binary answer with P(correct) = p.
double expected_posterior_shift(double p_correct, const core::DiagGaussian& current,
                                const core::DiagGaussian& if_correct, const core::DiagGaussian& if_wrong);

/// Information reward of asking question j given conditioning set x_O.
/// p = mean over `samples` posterior draws of decode(z)_j; posteriors for
/// x_O + {(j, 1)} and x_O + {(j, 0)} come from the encoder. Throws if j is
/// already in x_O.
double information_reward(const pvae::PVae& model, std::span<const Answer> conditioning, int question, int samples,
                          std::uint64_t seed);

// Caches the point features of every (question, value) pair so that candidate
// posteriors cost one head evaluation each. Read-only after construction.
class RewardEngine {
 public:
  explicit RewardEngine(const pvae::PVae& model);

  const pvae::PVae& model() const { return model_; }

  // Rewards for each candidate, sharing one set of `samples` posterior draws
  // for the predictive probabilities. Same seed gives the same draws as
  // information_reward.
  std::vector<double> rewards(std::span<const Answer> conditioning, std::span<const int> candidates, int samples,
                              std::uint64_t seed) const;

 private:
  const pvae::PVae& model_;
  core::Matrix features_;  // row 2j + x holds h(s) for answer x to question j
};

}  // namespace qinsight::selection
