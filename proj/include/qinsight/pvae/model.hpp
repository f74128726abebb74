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
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qinsight/core/autodiff.hpp"
#include "qinsight/core/gaussian.hpp"
#include "qinsight/core/tensor.hpp"
#include "qinsight/data/answers.hpp"

namespace qinsight::pvae {

using data::Answer;

// Layer sizes. A hidden size of 0 collapses that network to one affine map.
struct ModelConfig {
  int num_questions = 0;
  int latent_dim = 20;      // K
  int embedding_dim = 16;   // c, length of e_j
  int point_dim = 32;       // d, output of the per-answer feature net
  int point_hidden = 64;
  int head_hidden = 64;
  int decoder_hidden = 64;

  void validate() const;
  int point_input_dim() const { return embedding_dim + 2; }
};

// affine -> tanh -> affine (or a single affine when hidden == 0).
class Mlp {
 public:
  Mlp() = default;
  Mlp(const std::string& name, int input_dim, int hidden_dim, int output_dim);

  core::Matrix forward(const core::Matrix& x) const;
  core::Var forward(core::Tape& tape, core::Var x);

  void initialize(std::mt19937_64& rng);
  std::vector<core::ParamTensor*> parameters();
  std::vector<const core::ParamTensor*> parameters() const;

  int num_layers() const { return static_cast<int>(weights_.size()); }
  core::ParamTensor& weight(int layer) { return weights_.at(static_cast<std::size_t>(layer)); }
  core::ParamTensor& bias(int layer) { return biases_.at(static_cast<std::size_t>(layer)); }

 private:
  std::vector<core::ParamTensor> weights_;
  std::vector<core::ParamTensor> biases_;
};

/// Partial VAE over binary answers.
///
/// Encoder: each observed answer (j, x) becomes s = [x, x * e_j, b_j], is
/// mapped by the point net h, and the h(s) are summed in question order. The
/// head f maps the sum to (mu, raw) with sigma = softplus(raw) + 1e-4. The
/// decoder maps z to one Bernoulli logit per question.
class PVae {
 public:
  explicit PVae(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }
  int num_questions() const { return config_.num_questions; }
  int latent_dim() const { return config_.latent_dim; }

  // Random weights; question biases from observed correctness of `rows` when given.
  void initialize(std::uint64_t seed, const data::AnswerMatrix* matrix = nullptr, std::span<const int> rows = {});

  // Rows of s_ij for `answers` (in the given order).
  core::Matrix point_inputs(std::span<const Answer> answers) const;
  core::Matrix point_features(std::span<const Answer> answers) const;
  // Sum of point features in question order; zero vector for an empty set.
  core::Vector aggregate(std::span<const Answer> answers) const;
  core::DiagGaussian posterior_from_aggregate(const core::Vector& aggregate) const;
  // Posteriors for a batch of aggregates (one per row).
  std::vector<core::DiagGaussian> posteriors_from_aggregates(const core::Matrix& aggregates) const;
  core::DiagGaussian encode(std::span<const Answer> observed) const;

  // One row of logits per row of z.
  core::Matrix decoder_logits(const core::Matrix& z) const;
  core::Vector decode(const core::Vector& z) const;

  // Mean of decode(z) over `samples` posterior draws, seeded.
  core::Vector impute(std::span<const Answer> observed, int samples, std::uint64_t seed) const;
  // Same, with caller-supplied standard-normal noise (samples x K).
  core::Vector impute_with_noise(const core::DiagGaussian& posterior, const core::Matrix& noise) const;

  // E_{z~q(z|encoder_input)}[sum over `likelihood` of log Bernoulli] - KL[q || N(0, I)],
  // with the expectation taken over the rows of `noise` (L x K).
  double partial_elbo(std::span<const Answer> encoder_input, std::span<const Answer> likelihood,
                      const core::Matrix& noise) const;
  double partial_elbo(std::span<const Answer> row, const core::Matrix& noise) const {
    return partial_elbo(row, row, noise);
  }
  // Ordinary VAE ELBO for a dense 0/1 row of length M.
  double full_elbo(const core::Vector& dense_row, const core::Matrix& noise) const;

  std::vector<core::ParamTensor*> parameters();
  std::vector<const core::ParamTensor*> parameters() const;

  core::ParamTensor& embedding() { return embedding_; }
  core::ParamTensor& question_bias() { return question_bias_; }
  Mlp& point_net() { return point_net_; }
  Mlp& head() { return head_; }
  Mlp& decoder() { return decoder_; }
  const core::ParamTensor& embedding() const { return embedding_; }
  const core::ParamTensor& question_bias() const { return question_bias_; }

 private:
  ModelConfig config_;
  core::ParamTensor embedding_;      // M x c
  core::ParamTensor question_bias_;  // M x 1
  Mlp point_net_;                    // c+2 -> d
  Mlp head_;                         // d -> 2K
  Mlp decoder_;                      // K -> M
};

// One student's contribution to a recorded minibatch.
struct BatchRow {
  std::span<const Answer> encoder_input;
  std::span<const Answer> likelihood;
};

struct BatchElbo {
  core::Var elbo;            // summed over rows
  core::Var log_likelihood;  // summed over rows, averaged over samples
  core::Var kl;              // summed over rows
};

// Records the summed partial ELBO of a minibatch. `noise` holds one B x K
// standard-normal matrix per Monte Carlo sample.
BatchElbo record_batch_elbo(core::Tape& tape, PVae& model, std::span<const BatchRow> rows,
                            std::span<const core::Matrix> noise);

}  // namespace qinsight::pvae
