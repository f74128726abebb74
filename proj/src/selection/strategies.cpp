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

#include "qinsight/selection/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "qinsight/analytics/reports.hpp"
#include "qinsight/core/error.hpp"
#include "qinsight/core/parallel.hpp"
#include "qinsight/core/random.hpp"
#include "qinsight/data/split.hpp"

namespace qinsight::selection {

RandSequence rand_strategy(std::span<const int> candidates, int steps, std::uint64_t seed) {
  if (steps < 1) throw ConfigError("rand_strategy: steps must be >= 1");
  std::vector<int> pool(candidates.begin(), candidates.end());
  std::sort(pool.begin(), pool.end());
  if (std::adjacent_find(pool.begin(), pool.end()) != pool.end())
    throw ConfigError("rand_strategy: repeated candidate");
  std::mt19937_64 rng(seed);
  RandSequence out;
  const auto n = std::min<std::size_t>(pool.size(), static_cast<std::size_t>(steps));
  // partial Fisher-Yates
  for (std::size_t k = 0; k < n; ++k) {
    const auto pick = k + static_cast<std::size_t>(core::unit_from_hash(rng()) * static_cast<double>(pool.size() - k));
    std::swap(pool[k], pool[std::min(pick, pool.size() - 1)]);
    out.sequence.push_back(pool[k]);
  }
  out.short_pool = n < static_cast<std::size_t>(steps);
  return out;
}

SingResult sing_strategy(const RewardEngine& engine, std::span<const PopulationMember> population,
                         const StrategyConfig& config, const TargetPredictor& predictor, int threads) {
  config.validate();
  if (population.empty()) throw ConfigError("sing_strategy: empty population");
  const auto& model = engine.model();
  const int m = model.num_questions();
  const TargetPredictor predict = predictor ? predictor : model_predictor(model, config.impute_samples);

  SingResult result;
  result.sessions.resize(population.size());
  for (std::size_t s = 0; s < population.size(); ++s) {
    const auto& member = population[s];
    if (!member.oracle) throw ConfigError("sing_strategy: member without oracle");
    auto& session = result.sessions[s];
    session.student = member.student;
    session.targets = member.targets;
  }
  core::parallel_for(population.size(), threads, [&](std::size_t s) {
    auto& session = result.sessions[s];
    session.initial_mae = target_mae(
        predict(session.student, {}, prediction_seed(config.seed, session.student, -1)), session.targets);
  });

  std::vector<char> chosen(static_cast<std::size_t>(m), 0);
  for (int k = 0; k < config.steps; ++k) {
    std::vector<std::vector<int>> eligible(population.size());
    std::vector<std::vector<double>> rewards(population.size());
    core::parallel_for(population.size(), threads, [&](std::size_t s) {
      const auto& session = result.sessions[s];
      for (int j : candidate_pool(m, session.conditioning, session.targets))
        if (!chosen[static_cast<std::size_t>(j)] && population[s].oracle->answer(j)) eligible[s].push_back(j);
      rewards[s] = engine.rewards(session.conditioning, eligible[s], config.reward_samples,
                                  reward_seed(config.seed, session.student, k));
    });
    std::vector<double> total(static_cast<std::size_t>(m), 0.0);
    std::vector<int> count(static_cast<std::size_t>(m), 0);
    for (std::size_t s = 0; s < population.size(); ++s)
      for (std::size_t c = 0; c < eligible[s].size(); ++c) {
        total[static_cast<std::size_t>(eligible[s][c])] += rewards[s][c];
        ++count[static_cast<std::size_t>(eligible[s][c])];
      }
    std::vector<int> pool;
    std::vector<double> mean;
    for (int j = 0; j < m; ++j)
      if (count[static_cast<std::size_t>(j)] > 0) {
        pool.push_back(j);
        mean.push_back(total[static_cast<std::size_t>(j)] / count[static_cast<std::size_t>(j)]);
      }
    const auto pick = argmax_candidate(pool, mean);
    if (!pick) {
      result.terminated_early = true;
      for (auto& session : result.sessions) session.terminated_early = true;
      break;
    }
    const int j = *pick;
    chosen[static_cast<std::size_t>(j)] = 1;
    result.sequence.push_back(j);
    const double shared_reward = mean[static_cast<std::size_t>(std::find(pool.begin(), pool.end(), j) - pool.begin())];
    core::parallel_for(population.size(), threads, [&](std::size_t s) {
      auto& session = result.sessions[s];
      StepRecord rec{j, -1, shared_reward, 0.0};
      if (std::binary_search(eligible[s].begin(), eligible[s].end(), j)) {
        rec.revealed = *population[s].oracle->answer(j);
        session.conditioning.push_back({j, rec.revealed});
      }
      rec.target_mae = target_mae(
          predict(session.student, session.conditioning, prediction_seed(config.seed, session.student, k)),
          session.targets);
      session.steps.push_back(rec);
    });
  }
  return result;
}

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kOurs: return "ours";
    case Strategy::kRand: return "rand";
    case Strategy::kSing: return "sing";
  }
  return "unknown";
}

Strategy parse_strategy(const std::string& name) {
  if (name == "ours") return Strategy::kOurs;
  if (name == "rand") return Strategy::kRand;
  if (name == "sing") return Strategy::kSing;
  throw ConfigError("unknown strategy '" + name + "' (expected ours, rand or sing)");
}

void EvaluationConfig::validate() const {
  session.validate();
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (students_per_run < 1) throw ConfigError("students per run must be >= 1");
  if (!(target_fraction > 0.0 && target_fraction < 1.0)) throw ConfigError("target fraction must be in (0, 1)");
  if (strategies.empty()) throw ConfigError("no strategies requested");
}

std::vector<StrategyCurve> evaluate_strategies(const pvae::PVae& model, const data::AnswerMatrix& matrix,
                                               std::span<const int> test_students, const EvaluationConfig& config,
                                               const OracleFactory& oracles, const TargetPredictor& predictor) {
  config.validate();
  if (matrix.num_questions() != model.num_questions())
    throw ConfigError("evaluate_strategies: matrix and model disagree on question count");
  const OracleFactory make_oracle =
      oracles ? oracles : [](int, std::span<const Answer> row) -> std::unique_ptr<AnswerOracle> {
    return std::make_unique<ReplayOracle>(row);
  };
  const RewardEngine engine(model);
  const int steps = config.session.steps;
  const int m = model.num_questions();

  std::vector<int> eligible;
  for (int i : test_students)
    if (!matrix.row(i).empty()) eligible.push_back(i);
  if (eligible.empty()) throw ConfigError("evaluate_strategies: no test student has answers");

  // curves[s][k] collects one MAE per (run, student)
  std::vector<std::vector<std::vector<double>>> samples(config.strategies.size(),
                                                        std::vector<std::vector<double>>(steps));
  std::vector<std::size_t> early(config.strategies.size(), 0);

  for (int run = 0; run < config.runs; ++run) {
    const std::uint64_t run_seed = core::derive_seed(config.session.seed, {static_cast<std::uint64_t>(run)});
    std::vector<int> students = eligible;
    auto rng = core::make_rng(run_seed, {0x5a3});
    std::shuffle(students.begin(), students.end(), rng);
    students.resize(std::min(students.size(), static_cast<std::size_t>(config.students_per_run)));
    std::sort(students.begin(), students.end());

    std::vector<std::vector<Answer>> targets(students.size());
    std::vector<std::unique_ptr<AnswerOracle>> oracle(students.size());
    for (std::size_t s = 0; s < students.size(); ++s) {
      const auto row = matrix.row(students[s]);
      targets[s] = data::hold_out_targets(row, config.target_fraction,
                                          core::derive_seed(run_seed, {0x7a6, static_cast<std::uint64_t>(students[s])}))
                       .targets;
      oracle[s] = make_oracle(students[s], row);
    }
    StrategyConfig session_config = config.session;
    session_config.seed = run_seed;

    for (std::size_t si = 0; si < config.strategies.size(); ++si) {
      std::vector<SelectionSession> sessions(students.size());
      switch (config.strategies[si]) {
        case Strategy::kOurs:
          core::parallel_for(students.size(), config.threads, [&](std::size_t s) {
            sessions[s] = run_session(engine, *oracle[s], students[s], targets[s], session_config, predictor);
          });
          break;
        case Strategy::kRand:
          core::parallel_for(students.size(), config.threads, [&](std::size_t s) {
            const auto pool = candidate_pool(m, {}, targets[s]);
            // full permutation; unanswerable questions are skipped when revealing
            const auto order = rand_strategy(
                pool, static_cast<int>(std::max<std::size_t>(pool.size(), 1)),
                core::derive_seed(run_seed, {0x4a2d, static_cast<std::uint64_t>(students[s])}));
            sessions[s] = run_fixed_sequence(model, *oracle[s], students[s], targets[s], order.sequence,
                                             session_config, predictor);
          });
          break;
        case Strategy::kSing: {
          std::vector<PopulationMember> population(students.size());
          for (std::size_t s = 0; s < students.size(); ++s)
            population[s] = {students[s], oracle[s].get(), targets[s]};
          sessions = sing_strategy(engine, population, session_config, predictor, config.threads).sessions;
          break;
        }
      }
      for (const auto& session : sessions) {
        const auto curve = session.mae_curve(steps);
        for (int k = 0; k < steps; ++k) samples[si][static_cast<std::size_t>(k)].push_back(curve[static_cast<std::size_t>(k)]);
        if (session.terminated_early) ++early[si];
      }
    }
  }

  std::vector<StrategyCurve> out;
  for (std::size_t si = 0; si < config.strategies.size(); ++si) {
    StrategyCurve curve;
    curve.strategy = config.strategies[si];
    curve.early_stops = early[si];
    curve.sessions = samples[si].front().size();
    for (const auto& values : samples[si]) {
      const double n = static_cast<double>(values.size());
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= n;
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      curve.mean_mae.push_back(mean);
      curve.stderr_mae.push_back(values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0);
    }
    out.push_back(std::move(curve));
  }
  return out;
}

void write_session_log(std::ostream& out, const SelectionSession& session,
                       std::span<const std::string> question_ids) {
  out << "step\tquestion_id\trevealed_value\treward\ttarget_mae\n";
  for (std::size_t k = 0; k < session.steps.size(); ++k) {
    const auto& s = session.steps[k];
    out << k + 1 << '\t' << question_ids[static_cast<std::size_t>(s.question)] << '\t';
    if (s.revealed >= 0)
      out << s.revealed;
    else
      out << "NA";
    out << '\t' << analytics::format_value(s.reward) << '\t' << analytics::format_value(s.target_mae) << '\n';
  }
}

void write_strategy_comparison(std::ostream& out, std::span<const StrategyCurve> curves) {
  out << "strategy\tstep\tmean_mae\tstderr\n";
  for (const auto& c : curves)
    for (std::size_t k = 0; k < c.mean_mae.size(); ++k)
      out << strategy_name(c.strategy) << '\t' << k + 1 << '\t' << analytics::format_value(c.mean_mae[k]) << '\t'
          << analytics::format_value(c.stderr_mae[k]) << '\n';
}

}  // namespace qinsight::selection
