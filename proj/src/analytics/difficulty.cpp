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

#include "qinsight/analytics/difficulty.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "qinsight/baselines/simple.hpp"
#include "qinsight/core/error.hpp"
#include "qinsight/core/parallel.hpp"
#include "qinsight/core/random.hpp"

namespace qinsight::analytics {

namespace {

DifficultyReport from_easiness(std::vector<double> easiness, const data::AnswerMatrix& matrix) {
  DifficultyReport r;
  r.n_observed = matrix.column_counts();
  r.n_imputed.resize(easiness.size());
  for (std::size_t j = 0; j < easiness.size(); ++j) {
    r.n_imputed[j] = matrix.num_students() - r.n_observed[j];
    r.difficulty.push_back(1.0 - easiness[j]);
  }
  r.easiness = std::move(easiness);
  return r;
}

}  // namespace

DifficultyReport difficulty(const pvae::PVae& model, const data::AnswerMatrix& matrix,
                            const DifficultyOptions& options) {
  const int n = matrix.num_students();
  const int m = matrix.num_questions();
  if (model.num_questions() != m)
    throw ConfigError("difficulty: model covers " + std::to_string(model.num_questions()) + " questions, matrix " +
                      std::to_string(m));

  // Completed row i: observed values where present, imputed probabilities elsewhere.
  std::vector<core::Vector> completed(static_cast<std::size_t>(n));
  core::parallel_for(static_cast<std::size_t>(n), options.threads, [&](std::size_t i) {
    const auto row = matrix.row(static_cast<int>(i));
    core::Vector values;
    if (static_cast<int>(row.size()) == m) {
      values = core::Vector::Zero(m);
    } else {
      values = model.impute(row, options.samples, core::derive_seed(options.seed, {i}));
    }
    for (const auto& a : row) values(a.question) = a.value;
    completed[i] = std::move(values);
  });
  std::vector<double> easiness(static_cast<std::size_t>(m), 0.0);
  for (int j = 0; j < m; ++j) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += completed[static_cast<std::size_t>(i)](j);
    easiness[static_cast<std::size_t>(j)] = total / n;
  }
  return from_easiness(std::move(easiness), matrix);
}

DifficultyReport difficulty_baseline(const data::AnswerMatrix& matrix, DifficultyScheme scheme, std::uint64_t seed) {
  const int n = matrix.num_students();
  const int m = matrix.num_questions();
  std::vector<double> easiness(static_cast<std::size_t>(m), 0.0);
  switch (scheme) {
    case DifficultyScheme::kRandom: {
      std::vector<int> perm(static_cast<std::size_t>(m));
      std::iota(perm.begin(), perm.end(), 0);
      std::mt19937_64 rng(seed);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int j = 0; j < m; ++j)
        easiness[static_cast<std::size_t>(j)] = m > 1 ? static_cast<double>(perm[static_cast<std::size_t>(j)]) / (m - 1) : 0.5;
      break;
    }
    case DifficultyScheme::kMajorityImpute: {
      const auto filled = baselines::majority_impute(matrix);
      const auto correct = filled.column_correct();
      for (int j = 0; j < m; ++j)
        easiness[static_cast<std::size_t>(j)] = static_cast<double>(correct[static_cast<std::size_t>(j)]) / n;
      break;
    }
    case DifficultyScheme::kObservedOnly: {
      const auto counts = matrix.column_counts();
      const auto correct = matrix.column_correct();
      const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
      const double global = total > 0 ? std::accumulate(correct.begin(), correct.end(), 0.0) / total : 0.5;
      for (int j = 0; j < m; ++j) {
        const auto js = static_cast<std::size_t>(j);
        easiness[js] = counts[js] > 0 ? static_cast<double>(correct[js]) / counts[js] : global;
      }
      break;
    }
  }
  return from_easiness(std::move(easiness), matrix);
}

TopicRanking topic_ranking(const DifficultyReport& report, const data::QuestionMeta& meta,
                           const data::AnswerMatrix& matrix) {
  if (meta.topics.size() != report.difficulty.size())
    throw ConfigError("topic_ranking: metadata covers " + std::to_string(meta.topics.size()) + " questions, report " +
                      std::to_string(report.difficulty.size()));
  TopicRanking out;
  std::map<std::string, std::pair<double, int>> acc;
  for (std::size_t j = 0; j < report.difficulty.size(); ++j) {
    if (meta.topics[j].empty()) {
      out.warnings.push_back("question " + matrix.question_id(static_cast<int>(j)) + " has no topics; excluded");
      continue;
    }
    for (const auto& t : meta.topics[j]) {
      acc[t].first += report.difficulty[j];
      acc[t].second += 1;
    }
  }
  for (const auto& [topic, sum_count] : acc)
    out.topics.push_back({topic, sum_count.first / sum_count.second, sum_count.second});
  std::stable_sort(out.topics.begin(), out.topics.end(), [](const TopicScore& a, const TopicScore& b) {
    if (a.mean_difficulty != b.mean_difficulty) return a.mean_difficulty > b.mean_difficulty;
    return a.topic < b.topic;
  });
  return out;
}

}  // namespace qinsight::analytics
