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
#include <functional>
#include <vector>

#include "qinsight/data/answers.hpp"
#include "qinsight/data/split.hpp"
#include "qinsight/pvae/model.hpp"

namespace qinsight::pvae {

// Which answers the reconstruction term scores for a row whose encoder input
// was thinned by dropout.
enum class LikelihoodTarget {
  kFullRow,       // every observed answer of the row
  kEncoderInput,  // only the answers the encoder saw
};

struct TrainConfig {
  int epochs = 50;
  double learning_rate = 1e-3;
  int batch_size = 128;
  // Per row and epoch a drop rate is drawn uniformly from [dropout_min,
  // dropout_max]; each observed answer is then withheld from the encoder with
  // that probability.
  double dropout_min = 0.0;
  double dropout_max = 0.99;
  LikelihoodTarget likelihood = LikelihoodTarget::kEncoderInput;
  // The KL term is weighted by min(1, epoch / kl_warmup_epochs); 0 disables.
  int kl_warmup_epochs = 20;
  int elbo_samples = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EpochStats {
  int epoch = 0;                 // 1-based
  double train_elbo = 0.0;       // mean per-row training objective
  double validation_elbo = 0.0;  // mean per-row ELBO, full rows, fixed noise
};

struct TrainResult {
  PVae model;
  std::vector<EpochStats> trace;
};

// Mean per-row partial ELBO with the whole row as encoder input and fixed,
// row-keyed noise.
double mean_elbo(const PVae& model, const data::AnswerMatrix& matrix, std::span<const int> rows, std::uint64_t seed);

TrainResult train(const data::AnswerMatrix& matrix, const data::StudentSplit& split, const ModelConfig& model_config,
                  const TrainConfig& config, const std::function<void(const EpochStats&)>& on_epoch = {});

}  // namespace qinsight::pvae
