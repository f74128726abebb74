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

#include "fixtures.hpp"

#include "qinsight/core/random.hpp"
#include "qinsight/pvae/train.hpp"

namespace qinsight::testing {

pvae::ModelConfig tiny_config(int num_questions) {
  pvae::ModelConfig c;
  c.num_questions = num_questions;
  c.latent_dim = 2;
  c.embedding_dim = 3;
  c.point_dim = 4;
  c.point_hidden = 5;
  c.head_hidden = 5;
  c.decoder_hidden = 5;
  return c;
}

pvae::PVae random_model(const pvae::ModelConfig& config, std::uint64_t seed) {
  pvae::PVae model(config);
  model.initialize(seed);
  // non-zero biases so their gradients are exercised
  std::mt19937_64 rng(seed + 1);
  for (auto* p : model.parameters())
    if (p->cols() == 1) p->init_normal(rng, 4.0);
  return model;
}

data::AnswerMatrix synthetic_matrix(int students, int questions, double density, std::uint64_t seed) {
  const auto truth = synth::generate_ground_truth(students, questions, seed);
  return synth::sample_answers(truth, {synth::ObservationMode::kMcar, density, 0.5}, seed + 1).matrix;
}

const TrainedFixture& trained_fixture() {
  static const TrainedFixture fixture = [] {
    auto truth = synth::generate_ground_truth(800, 40, 101);
    auto matrix = synth::sample_answers(truth, {synth::ObservationMode::kMcar, 0.5, 0.5}, 102).matrix;
    auto split = data::split_students(matrix, {}, 103);
    pvae::ModelConfig config;
    config.num_questions = matrix.num_questions();
    pvae::TrainConfig train;
    train.epochs = 60;
    train.seed = 104;
    auto result = pvae::train(matrix, split, config, train);
    return TrainedFixture{std::move(truth), std::move(matrix), std::move(split), std::move(result.model)};
  }();
  return fixture;
}

std::vector<data::Answer> simulated_answers(const synth::IrtGroundTruth& truth, double theta,
                                            std::span<const int> questions, std::uint64_t seed) {
  std::vector<data::Answer> out;
  for (int j : questions) {
    const double p = synth::answer_probability(theta, truth.discrimination[static_cast<std::size_t>(j)],
                                               truth.difficulty[static_cast<std::size_t>(j)]);
    const double u = core::unit_from_hash(core::derive_seed(seed, {static_cast<std::uint64_t>(j)}));
    out.push_back({j, u < p ? 1 : 0});
  }
  return out;
}

}  // namespace qinsight::testing
