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

#include "qinsight/selection/session.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qinsight/core/error.hpp"
#include "qinsight/core/random.hpp"

namespace qinsight::selection {

namespace {

std::optional<int> lookup(const std::vector<Answer>& row, int question) {
  auto it = std::lower_bound(row.begin(), row.end(), question,
                             [](const Answer& a, int q) { return a.question < q; });
  if (it != row.end() && it->question == question) return it->value;
  return std::nullopt;
}

std::vector<Answer> sorted_row(std::span<const Answer> row) {
  std::vector<Answer> out(row.begin(), row.end());
  std::sort(out.begin(), out.end(), [](const Answer& a, const Answer& b) { return a.question < b.question; });
  for (std::size_t k = 1; k < out.size(); ++k)
    if (out[k].question == out[k - 1].question) throw ConfigError("answer row has a repeated question");
  return out;
}

TargetPredictor resolve(const pvae::PVae& model, const StrategyConfig& config, const TargetPredictor& predictor) {
  return predictor ? predictor : model_predictor(model, config.impute_samples);
}

}  // namespace

void StrategyConfig::validate() const {
  if (steps < 1) throw ConfigError("steps must be >= 1");
  if (reward_samples < 1) throw ConfigError("reward samples must be >= 1");
  if (impute_samples < 1) throw ConfigError("imputation samples must be >= 1");
}

ReplayOracle::ReplayOracle(std::span<const Answer> row) : row_(sorted_row(row)) {}

std::optional<int> ReplayOracle::answer(int question) const { return lookup(row_, question); }

SyntheticOracle::SyntheticOracle(const synth::IrtGroundTruth& truth, int student, std::span<const Answer> logged,
                                 std::uint64_t seed)
    : truth_(truth), student_(student), logged_(sorted_row(logged)), seed_(seed) {
  if (student < 0 || student >= static_cast<int>(truth.ability.size()))
    throw ConfigError("SyntheticOracle: student out of range");
}

std::optional<int> SyntheticOracle::answer(int question) const {
  if (auto v = lookup(logged_, question)) return v;
  if (question < 0 || question >= static_cast<int>(truth_.difficulty.size())) return std::nullopt;
  const auto q = static_cast<std::size_t>(question);
  const double p = synth::answer_probability(truth_.ability[static_cast<std::size_t>(student_)],
                                             truth_.discrimination[q], truth_.difficulty[q]);
  const double u = core::unit_from_hash(
      core::derive_seed(seed_, {static_cast<std::uint64_t>(student_), static_cast<std::uint64_t>(question)}));
  return u < p ? 1 : 0;
}

std::vector<int> SelectionSession::chosen() const {
  std::vector<int> out;
  out.reserve(steps.size());
  for (const auto& s : steps)
    if (s.revealed >= 0) out.push_back(s.question);
  return out;
}

std::vector<double> SelectionSession::mae_curve(int n) const {
  std::vector<double> out(static_cast<std::size_t>(std::max(n, 0)));
  double last = initial_mae;
  for (int k = 0; k < n; ++k) {
    if (k < static_cast<int>(steps.size())) last = steps[static_cast<std::size_t>(k)].target_mae;
    out[static_cast<std::size_t>(k)] = last;
  }
  return out;
}

double target_mae(const core::Vector& predictions, std::span<const Answer> targets) {
  if (targets.empty()) return std::numeric_limits<double>::quiet_NaN();
  double total = 0.0;
  for (const Answer& t : targets) {
    if (t.question < 0 || t.question >= predictions.size()) throw ConfigError("target_mae: target out of range");
    total += std::abs(predictions(t.question) - t.value);
  }
  return total / static_cast<double>(targets.size());
}

std::vector<int> candidate_pool(int num_questions, std::span<const Answer> conditioning,
                                std::span<const Answer> targets) {
  std::vector<char> excluded(static_cast<std::size_t>(num_questions), 0);
  for (const Answer& a : conditioning) excluded.at(static_cast<std::size_t>(a.question)) = 1;
  for (const Answer& a : targets) excluded.at(static_cast<std::size_t>(a.question)) = 1;
  std::vector<int> out;
  for (int j = 0; j < num_questions; ++j)
    if (!excluded[static_cast<std::size_t>(j)]) out.push_back(j);
  return out;
}

std::vector<RankedCandidate> rank_candidates(const RewardEngine& engine, std::span<const Answer> conditioning,
                                             std::span<const int> candidates, int samples, std::uint64_t seed) {
  const auto r = engine.rewards(conditioning, candidates, samples, seed);
  std::vector<RankedCandidate> out;
  out.reserve(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) out.push_back({candidates[k], r[k]});
  std::sort(out.begin(), out.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
    if (a.reward != b.reward) return a.reward > b.reward;
    return a.question < b.question;
  });
  return out;
}

std::optional<int> argmax_candidate(std::span<const int> candidates, std::span<const double> rewards) {
  if (candidates.size() != rewards.size()) throw ConfigError("argmax_candidate: size mismatch");
  std::optional<int> best;
  double best_reward = 0.0;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (!best || rewards[k] > best_reward || (rewards[k] == best_reward && candidates[k] < *best)) {
      best = candidates[k];
      best_reward = rewards[k];
    }
  }
  return best;
}

std::optional<int> select_next(const RewardEngine& engine, const SelectionSession& session, int samples,
                               std::uint64_t seed) {
  const auto pool = candidate_pool(engine.model().num_questions(), session.conditioning, session.targets);
  const auto r = engine.rewards(session.conditioning, pool, samples, seed);
  return argmax_candidate(pool, r);
}

std::uint64_t reward_seed(std::uint64_t base, int student, int step) {
  return core::derive_seed(base, {static_cast<std::uint64_t>(student), static_cast<std::uint64_t>(step), 0});
}

std::uint64_t prediction_seed(std::uint64_t base, int student, int step) {
  return core::derive_seed(base, {static_cast<std::uint64_t>(student), static_cast<std::uint64_t>(step), 1});
}

TargetPredictor model_predictor(const pvae::PVae& model, int samples) {
  return [&model, samples](int, std::span<const Answer> conditioning, std::uint64_t seed) {
    return model.impute(conditioning, samples, seed);
  };
}

SelectionSession run_session(const RewardEngine& engine, const AnswerOracle& oracle, int student,
                             std::vector<Answer> targets, const StrategyConfig& config,
                             const TargetPredictor& predictor) {
  config.validate();
  const auto& model = engine.model();
  const auto predict = resolve(model, config, predictor);
  SelectionSession session;
  session.student = student;
  session.targets = std::move(targets);
  // step index -1 is the empty-set baseline
  session.initial_mae = target_mae(predict(student, {}, prediction_seed(config.seed, student, -1)), session.targets);

  for (int k = 0; k < config.steps; ++k) {
    const auto pool = candidate_pool(model.num_questions(), session.conditioning, session.targets);
    const auto ranked = rank_candidates(engine, session.conditioning, pool, config.reward_samples,
                                        reward_seed(config.seed, student, k));
    // a question the student cannot answer is removed and the next best taken
    std::optional<RankedCandidate> pick;
    std::optional<int> value;
    for (const auto& c : ranked) {
      value = oracle.answer(c.question);
      if (value) {
        pick = c;
        break;
      }
    }
    if (!pick) {
      session.terminated_early = true;
      break;
    }
    session.conditioning.push_back({pick->question, *value});
    const double mae = target_mae(predict(student, session.conditioning, prediction_seed(config.seed, student, k)),
                                  session.targets);
    session.steps.push_back({pick->question, *value, pick->reward, mae});
  }
  return session;
}

SelectionSession run_fixed_sequence(const pvae::PVae& model, const AnswerOracle& oracle, int student,
                                    std::vector<Answer> targets, std::span<const int> sequence,
                                    const StrategyConfig& config, const TargetPredictor& predictor) {
  config.validate();
  const auto predict = resolve(model, config, predictor);
  SelectionSession session;
  session.student = student;
  session.targets = std::move(targets);
  session.initial_mae = target_mae(predict(student, {}, prediction_seed(config.seed, student, -1)), session.targets);

  std::vector<char> excluded(static_cast<std::size_t>(model.num_questions()), 0);
  for (const Answer& t : session.targets) excluded.at(static_cast<std::size_t>(t.question)) = 1;
  auto next = sequence.begin();
  for (int k = 0; k < config.steps; ++k) {
    std::optional<int> value;
    int question = -1;
    for (; next != sequence.end(); ++next) {
      const int j = *next;
      if (j < 0 || j >= model.num_questions()) throw ConfigError("sequence entry out of range");
      if (excluded[static_cast<std::size_t>(j)]) continue;
      excluded[static_cast<std::size_t>(j)] = 1;
      value = oracle.answer(j);
      if (value) {
        question = j;
        ++next;
        break;
      }
    }
    if (question < 0) {
      session.terminated_early = true;
      break;
    }
    session.conditioning.push_back({question, *value});
    const double mae = target_mae(predict(student, session.conditioning, prediction_seed(config.seed, student, k)),
                                  session.targets);
    session.steps.push_back({question, *value, std::numeric_limits<double>::quiet_NaN(), mae});
  }
  return session;
}

}  // namespace qinsight::selection
