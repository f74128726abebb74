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

#include "qinsight/analytics/quality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qinsight/core/error.hpp"
#include "qinsight/core/gaussian.hpp"
#include "qinsight/core/parallel.hpp"
#include "qinsight/core/random.hpp"

namespace qinsight::analytics {

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("binary_entropy: p must lie in [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

double entropy_baseline(const data::AnswerMatrix& matrix, int question) {
  int count = 0;
  int correct = 0;
  for (int i = 0; i < matrix.num_students(); ++i) {
    if (auto v = matrix.value(i, question)) {
      ++count;
      correct += *v;
    }
  }
  if (count == 0) throw DataError("entropy_baseline: question " + matrix.question_id(question) + " has no answers");
  return binary_entropy(static_cast<double>(correct) / count);
}

double quality(const pvae::PVae& model, const data::AnswerMatrix& matrix, int question, int samples,
               std::uint64_t seed) {
  if (samples < 1) throw ConfigError("quality: S must be >= 1");
  if (question < 0 || question >= matrix.num_questions()) throw ConfigError("quality: question index out of range");
  std::vector<int> answers;  // x_ij of each student who answered j, in student order
  for (int i = 0; i < matrix.num_students(); ++i)
    if (auto v = matrix.value(i, question)) answers.push_back(*v);
  if (answers.empty())
    throw DataError("quality: question " + matrix.question_id(question) + " (index " + std::to_string(question) +
                    ") has no observed answers");

  std::mt19937_64 rng(seed);
  std::vector<int> picked;
  picked.reserve(static_cast<std::size_t>(samples));
  while (static_cast<int>(picked.size()) < samples) {
    std::vector<std::size_t> order(answers.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k = 0; k < order.size() && static_cast<int>(picked.size()) < samples; ++k)
      picked.push_back(answers[order[k]]);
  }

  // The singleton posterior depends only on the answer value, so both KLs are computed once.
  double kl[2];
  for (int x = 0; x < 2; ++x) {
    const data::Answer single[] = {{question, x}};
    kl[x] = core::kl_to_standard(model.encode(single));
  }
  double total = 0.0;
  for (int x : picked) total += kl[x];
  return total / static_cast<double>(picked.size());
}

QualityReport quality_report(const pvae::PVae& model, const data::AnswerMatrix& matrix,
                             const QualityOptions& options) {
  if (options.max_samples < 1) throw ConfigError("quality_report: max samples must be >= 1");
  const auto counts = matrix.column_counts();
  QualityReport report;
  for (int j = 0; j < matrix.num_questions(); ++j)
    if (counts[static_cast<std::size_t>(j)] > 0) report.question.push_back(j);
  const std::size_t q = report.question.size();
  report.reward.resize(q);
  report.entropy.resize(q);
  report.samples.resize(q);
  core::parallel_for(q, options.threads, [&](std::size_t k) {
    const int j = report.question[k];
    const int s = std::min(counts[static_cast<std::size_t>(j)], options.max_samples);
    report.samples[k] = s;
    report.reward[k] = quality(model, matrix, j, s, core::derive_seed(options.seed, {static_cast<std::uint64_t>(j)}));
    report.entropy[k] = entropy_baseline(matrix, j);
  });
  return report;
}

}  // namespace qinsight::analytics
