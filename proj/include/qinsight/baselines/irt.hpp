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
#include "qinsight/data/split.hpp"
#include "qinsight/pvae/imputation.hpp"

namespace qinsight::baselines {

struct IrtConfig {
  int epochs = 300;
  double learning_rate = 0.05;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
  // Abort when the objective falls this many epochs in a row.
  int divergence_patience = 5;

  void validate() const;
};

/// Rasch model P(x_ij = 1) = sigmoid(ability_i + intercept_j).
struct IrtParams {
  std::vector<double> ability;    // every student; non-train rows fit post hoc
  std::vector<double> intercept;  // easiness d_j
  IrtConfig config;
  std::vector<double> objective_trace;       // penalised train log-likelihood per epoch
  std::vector<double> log_likelihood_trace;  // unpenalised
};

// Adam on the penalised train log-likelihood (full batch per epoch), then
// Newton fits for the remaining students with intercepts frozen.
IrtParams fit_irt(const data::AnswerMatrix& matrix, const data::StudentSplit& split, const IrtConfig& config = {});

double irt_predict(const IrtParams& params, int student, int question);

// MAP ability for one answer set under fixed intercepts (Newton, concave).
double fit_ability(std::span<const data::Answer> answers, std::span<const double> intercepts, double l2);

class IrtImputer : public pvae::Imputer {
 public:
  explicit IrtImputer(const IrtParams& params) : params_(params) {}
  std::vector<double> predict(std::span<const data::Answer> conditioning, std::uint64_t seed) const override;

 private:
  const IrtParams& params_;
};

}  // namespace qinsight::baselines
