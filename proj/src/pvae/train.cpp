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

#include "qinsight/pvae/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "qinsight/core/adam.hpp"
#include "qinsight/core/error.hpp"
#include "qinsight/core/random.hpp"

namespace qinsight::pvae {

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("train: epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("train: learning rate must be positive");
  if (batch_size < 1) throw ConfigError("train: batch size must be >= 1");
  if (!(dropout_min >= 0.0 && dropout_max < 1.0 && dropout_min <= dropout_max))
    throw ConfigError("train: dropout range must satisfy 0 <= min <= max < 1");
  if (kl_warmup_epochs < 0) throw ConfigError("train: kl warm-up epochs must be >= 0");
  if (elbo_samples < 1) throw ConfigError("train: elbo samples must be >= 1");
}

double mean_elbo(const PVae& model, const data::AnswerMatrix& matrix, std::span<const int> rows, std::uint64_t seed) {
  if (rows.empty()) return 0.0;
  const int m = model.num_questions();
  const auto k = static_cast<core::Index>(model.latent_dim());
  std::vector<Answer> pairs;
  for (int j = 0; j < m; ++j) pairs.insert(pairs.end(), {Answer{j, 0}, Answer{j, 1}});
  const core::Matrix table = model.point_features(pairs);  // row 2j + x

  const auto n = static_cast<core::Index>(rows.size());
  core::Matrix agg = core::Matrix::Zero(n, table.cols());
  core::Matrix noise(n, k);
  for (core::Index r = 0; r < n; ++r) {
    const int i = rows[static_cast<std::size_t>(r)];
    for (const Answer& a : matrix.row(i)) agg.row(r) += table.row(2 * a.question + a.value);
    std::mt19937_64 rng = core::make_rng(seed, {static_cast<std::uint64_t>(i)});
    noise.row(r) = core::standard_normal(1, k, rng);
  }
  const auto posts = model.posteriors_from_aggregates(agg);
  core::Matrix z(n, k);
  for (core::Index r = 0; r < n; ++r) {
    const auto& q = posts[static_cast<std::size_t>(r)];
    z.row(r) = (q.mean().array() + q.stddev().array() * noise.row(r).transpose().array()).transpose();
  }
  const core::Matrix logits = model.decoder_logits(z);
  double total = 0.0;
  for (core::Index r = 0; r < n; ++r) {
    double ll = 0.0;
    for (const Answer& a : matrix.row(rows[static_cast<std::size_t>(r)])) {
      const double v = logits(r, a.question);
      ll += a.value * v - core::softplus(v);
    }
    total += ll - core::kl_to_standard(posts[static_cast<std::size_t>(r)]);
  }
  return total / static_cast<double>(n);
}

TrainResult train(const data::AnswerMatrix& matrix, const data::StudentSplit& split, const ModelConfig& model_config,
                  const TrainConfig& config, const std::function<void(const EpochStats&)>& on_epoch) {
  config.validate();
  if (model_config.num_questions != matrix.num_questions())
    throw ConfigError("train: model expects " + std::to_string(model_config.num_questions) + " questions, data has " +
                      std::to_string(matrix.num_questions()));
  if (split.train.empty()) throw ConfigError("train: empty training split");

  TrainResult result{PVae(model_config), {}};
  PVae& model = result.model;
  model.initialize(config.seed, &matrix, split.train);

  auto params = model.parameters();
  core::AdamOptions adam_options;
  adam_options.learning_rate = config.learning_rate;
  core::AdamState adam = core::make_adam_state(params, adam_options);

  const std::uint64_t validation_seed = core::derive_seed(config.seed, {0x7a11d});
  std::vector<int> order = split.train;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::mt19937_64 rng = core::make_rng(config.seed, {0xe90c, static_cast<std::uint64_t>(epoch)});
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_real_distribution<double> rate(config.dropout_min, config.dropout_max);

    double elbo_total = 0.0;
    int batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      std::vector<std::vector<Answer>> kept(stop - start);
      std::vector<BatchRow> rows(stop - start);
      for (std::size_t r = 0; r < kept.size(); ++r) {
        const auto full = matrix.row(order[start + r]);
        const double drop = config.dropout_max > 0.0 ? rate(rng) : 0.0;
        for (const Answer& a : full)
          if (core::unit_from_hash(rng()) >= drop) kept[r].push_back(a);
        rows[r] = BatchRow{kept[r], config.likelihood == LikelihoodTarget::kFullRow ? full : kept[r]};
      }
      std::vector<core::Matrix> noise;
      for (int l = 0; l < config.elbo_samples; ++l)
        noise.push_back(core::standard_normal(static_cast<core::Index>(rows.size()), model.latent_dim(), rng));

      core::Tape tape;
      const BatchElbo graph = record_batch_elbo(tape, model, rows, noise);
      const double batch_elbo = tape.scalar(graph.elbo);
      if (!std::isfinite(batch_elbo)) {
        throw NumericalError("train: non-finite ELBO at epoch " + std::to_string(epoch) + ", batch " +
                             std::to_string(batch_index));
      }
      elbo_total += batch_elbo;
      const double beta =
          config.kl_warmup_epochs > 0 ? std::min(1.0, static_cast<double>(epoch) / config.kl_warmup_epochs) : 1.0;
      const core::Var objective =
          beta == 1.0 ? graph.elbo : core::sub(tape, graph.log_likelihood, core::scale(tape, graph.kl, beta));
      core::Var loss = core::scale(tape, objective, -1.0 / static_cast<double>(rows.size()));
      for (auto* p : params) p->zero_grad();
      tape.backward(loss);
      try {
        core::adam_step(params, adam);
      } catch (const NumericalError& e) {
        throw NumericalError(std::string(e.what()) + " (epoch " + std::to_string(epoch) + ", batch " +
                             std::to_string(batch_index) + ")");
      }
      ++batch_index;
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_elbo = elbo_total / static_cast<double>(order.size());
    stats.validation_elbo = mean_elbo(model, matrix, split.validation, validation_seed);
    result.trace.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  for (auto* p : params) p->zero_grad();
  return result;
}

}  // namespace qinsight::pvae
