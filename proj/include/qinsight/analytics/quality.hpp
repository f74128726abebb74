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
#include <vector>

#include "qinsight/data/answers.hpp"
#include "qinsight/pvae/model.hpp"

namespace qinsight::analytics {

// -p ln p - (1-p) ln(1-p), with H(0) = H(1) = 0.
double binary_entropy(double p);

// Entropy of question j's observed correctness rate.
double entropy_baseline(const data::AnswerMatrix& matrix, int question);

/// Question quality R(j): mean over `samples` students who answered j
/// (drawn without replacement while possible) of KL[q(z | {x_ij}) || N(0, I)].
/// Only the single answer to j is conditioned on. Throws if nobody answered j.
double quality(const pvae::PVae& model, const data::AnswerMatrix& matrix, int question, int samples,
               std::uint64_t seed);

struct QualityReport {
  std::vector<int> question;  // questions with at least one observed answer
  std::vector<double> reward;
  std::vector<double> entropy;
  std::vector<int> samples;
};

struct QualityOptions {
  int max_samples = 500;  // S = min(observed count, max_samples)
  std::uint64_t seed = 0;
  int threads = 1;
};

QualityReport quality_report(const pvae::PVae& model, const data::AnswerMatrix& matrix,
                             const QualityOptions& options = {});

}  // namespace qinsight::analytics
