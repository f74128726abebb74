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

#include "qinsight/selection/reward.hpp"

#include <random>
#include <string>

#include "qinsight/core/error.hpp"

namespace qinsight::selection {

double expected_posterior_shift(double p_correct, const core::DiagGaussian& current,
                                const core::DiagGaussian& if_correct, const core::DiagGaussian& if_wrong) {
  if (!(p_correct >= 0.0 && p_correct <= 1.0)) throw ConfigError("expected_posterior_shift: p outside [0, 1]");
  return p_correct * core::gaussian_kl(if_correct, current) + (1.0 - p_correct) * core::gaussian_kl(if_wrong, current);
}

double information_reward(const pvae::PVae& model, std::span<const Answer> conditioning, int question, int samples,
                          std::uint64_t seed) {
  for (const Answer& a : conditioning)
    if (a.question == question)
      throw ConfigError("information_reward: question " + std::to_string(question) + " is already conditioned on");
  const core::Vector p = model.impute(conditioning, samples, seed);
  std::vector<Answer> with(conditioning.begin(), conditioning.end());
  with.push_back({question, 1});
  const auto if_correct = model.encode(with);
  with.back().value = 0;
  const auto if_wrong = model.encode(with);
  return expected_posterior_shift(p(question), model.encode(conditioning), if_correct, if_wrong);
}

RewardEngine::RewardEngine(const pvae::PVae& model) : model_(model) {
  const int m = model.num_questions();
  std::vector<Answer> all;
  all.reserve(static_cast<std::size_t>(2 * m));
  for (int j = 0; j < m; ++j) {
    all.push_back({j, 0});
    all.push_back({j, 1});
  }
  features_ = model.point_features(all);
}

std::vector<double> RewardEngine::rewards(std::span<const Answer> conditioning, std::span<const int> candidates,
                                          int samples, std::uint64_t seed) const {
  if (samples < 1) throw ConfigError("rewards: need at least one sample");
  const int m = model_.num_questions();
  const auto observed = data::canonical_answers(conditioning, m);
  std::vector<char> taken(static_cast<std::size_t>(m), 0);
  for (const Answer& a : observed) taken[static_cast<std::size_t>(a.question)] = 1;

  const core::Vector agg = model_.aggregate(observed);
  const auto current = model_.posterior_from_aggregate(agg);
  std::mt19937_64 rng(seed);
  const core::Matrix noise = core::standard_normal(samples, model_.latent_dim(), rng);
  const core::Vector p = model_.impute_with_noise(current, noise);

  const auto c = static_cast<core::Index>(candidates.size());
  if (c == 0) return {};
  core::Matrix updated(2 * c, agg.size());
  for (core::Index k = 0; k < c; ++k) {
    const int j = candidates[static_cast<std::size_t>(k)];
    if (j < 0 || j >= m) throw ConfigError("rewards: candidate out of range");
    if (taken[static_cast<std::size_t>(j)])
      throw ConfigError("rewards: candidate " + std::to_string(j) + " is already conditioned on");
    updated.row(2 * k) = agg.transpose() + features_.row(2 * j + 1);
    updated.row(2 * k + 1) = agg.transpose() + features_.row(2 * j);
  }
  const auto posteriors = model_.posteriors_from_aggregates(updated);
  std::vector<double> out(static_cast<std::size_t>(c));
  for (core::Index k = 0; k < c; ++k) {
    const int j = candidates[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(k)] = expected_posterior_shift(
        p(j), current, posteriors[static_cast<std::size_t>(2 * k)], posteriors[static_cast<std::size_t>(2 * k + 1)]);
  }
  return out;
}

}  // namespace qinsight::selection
