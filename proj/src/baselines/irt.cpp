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

#include "qinsight/baselines/irt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qinsight/core/adam.hpp"
#include "qinsight/core/error.hpp"
#include "qinsight/core/tensor.hpp"

namespace qinsight::baselines {

void IrtConfig::validate() const {
  if (epochs < 1) throw ConfigError("irt: epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("irt: learning rate must be positive");
  if (!(l2 > 0.0)) throw ConfigError("irt: l2 weight must be positive to keep estimates finite");
  if (divergence_patience < 1) throw ConfigError("irt: divergence patience must be >= 1");
}

double fit_ability(std::span<const data::Answer> answers, std::span<const double> intercepts, double l2) {
  double theta = 0.0;
  for (int it = 0; it < 100; ++it) {
    double grad = -2.0 * l2 * theta;
    double curv = -2.0 * l2;
    for (const auto& a : answers) {
      const double p = core::sigmoid(theta + intercepts[static_cast<std::size_t>(a.question)]);
      grad += a.value - p;
      curv -= p * (1.0 - p);
    }
    const double step = std::clamp(-grad / curv, -2.0, 2.0);
    theta += step;
    if (std::abs(step) < 1e-10) break;
  }
  return theta;
}

IrtParams fit_irt(const data::AnswerMatrix& matrix, const data::StudentSplit& split, const IrtConfig& config) {
  config.validate();
  std::size_t n_obs = 0;
  for (int i : split.train) n_obs += matrix.row(i).size();
  if (split.train.empty() || n_obs == 0) throw ConfigError("fit_irt: no training answers");

  const int n = matrix.num_students();
  const int m = matrix.num_questions();
  core::ParamTensor ability("irt.ability", n, 1);
  core::ParamTensor intercept("irt.intercept", m, 1);
  core::ParamTensor* params[] = {&ability, &intercept};
  core::AdamOptions options;
  options.learning_rate = config.learning_rate;
  core::AdamState adam = core::make_adam_state(params, options);

  IrtParams out;
  out.config = config;
  int falling = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    ability.zero_grad();
    intercept.zero_grad();
    auto g_theta = ability.mutable_grad();
    auto g_d = intercept.mutable_grad();
    const auto& theta = ability.value();
    const auto& d = intercept.value();
    double loglik = 0.0;
    double penalty = 0.0;
    for (int i : split.train) {
      for (const auto& a : matrix.row(i)) {
        const double logit = theta(i, 0) + d(a.question, 0);
        loglik += a.value * logit - core::softplus(logit);
        const double resid = a.value - core::sigmoid(logit);
        // Gradients of the loss (negated objective), scaled per observation.
        g_theta(i, 0) -= resid;
        g_d(a.question, 0) -= resid;
      }
      penalty += theta(i, 0) * theta(i, 0);
      g_theta(i, 0) += 2.0 * config.l2 * theta(i, 0);
    }
    for (int j = 0; j < m; ++j) {
      penalty += d(j, 0) * d(j, 0);
      g_d(j, 0) += 2.0 * config.l2 * d(j, 0);
    }
    const double objective = loglik - config.l2 * penalty;
    if (!std::isfinite(objective)) throw NumericalError("fit_irt: non-finite objective at epoch " + std::to_string(epoch));
    if (!out.objective_trace.empty() && objective < out.objective_trace.back()) {
      if (++falling >= config.divergence_patience)
        throw NumericalError("fit_irt: objective fell " + std::to_string(falling) + " epochs running (epoch " +
                             std::to_string(epoch + 1) + ")");
    } else {
      falling = 0;
    }
    out.objective_trace.push_back(objective);
    out.log_likelihood_trace.push_back(loglik);
    g_theta /= static_cast<double>(n_obs);
    g_d /= static_cast<double>(n_obs);
    core::adam_step(params, adam);
  }

  out.intercept.assign(intercept.value().data(), intercept.value().data() + m);
  out.ability.assign(ability.value().data(), ability.value().data() + n);
  std::vector<char> in_train(static_cast<std::size_t>(n), 0);
  for (int i : split.train) in_train[static_cast<std::size_t>(i)] = 1;
  for (int i = 0; i < n; ++i)
    if (!in_train[static_cast<std::size_t>(i)])
      out.ability[static_cast<std::size_t>(i)] = fit_ability(matrix.row(i), out.intercept, config.l2);
  return out;
}

double irt_predict(const IrtParams& params, int student, int question) {
  return core::sigmoid(params.ability.at(static_cast<std::size_t>(student)) +
                       params.intercept.at(static_cast<std::size_t>(question)));
}

std::vector<double> IrtImputer::predict(std::span<const data::Answer> conditioning, std::uint64_t) const {
  const double theta = fit_ability(conditioning, params_.intercept, params_.config.l2);
  std::vector<double> out(params_.intercept.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = core::sigmoid(theta + params_.intercept[j]);
  return out;
}

}  // namespace qinsight::baselines
