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

#include "qinsight/pvae/imputation.hpp"

#include <cmath>

#include "qinsight/core/error.hpp"
#include "qinsight/core/parallel.hpp"
#include "qinsight/core/random.hpp"
#include "qinsight/data/split.hpp"

namespace qinsight::pvae {

std::vector<double> PVaeImputer::predict(std::span<const data::Answer> conditioning, std::uint64_t seed) const {
  const core::Vector p = model_.impute(conditioning, samples_, seed);
  return std::vector<double>(p.data(), p.data() + p.size());
}

ImputationScore score_predictions(std::span<const double> predictions, std::span<const int> labels, double threshold) {
  if (predictions.size() != labels.size()) throw ConfigError("score_predictions: length mismatch");
  ImputationScore s;
  double correct = 0.0;
  double abs_err = 0.0;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const int predicted = predictions[k] >= threshold ? 1 : 0;
    correct += predicted == labels[k] ? 1.0 : 0.0;
    abs_err += std::abs(predictions[k] - labels[k]);
  }
  s.num_targets = labels.size();
  if (!labels.empty()) {
    s.accuracy = correct / static_cast<double>(labels.size());
    s.mae = abs_err / static_cast<double>(labels.size());
  }
  return s;
}

ImputationScore evaluate_imputation(const Imputer& imputer, const data::AnswerMatrix& matrix,
                                    std::span<const int> students, double conditioning_fraction, std::uint64_t seed,
                                    double threshold, int threads) {
  if (!(conditioning_fraction > 0.0 && conditioning_fraction < 1.0))
    throw ConfigError("evaluate_imputation: conditioning fraction must lie in (0, 1)");

  std::vector<std::vector<double>> preds(students.size());
  std::vector<std::vector<int>> labels(students.size());
  std::vector<char> skipped(students.size(), 0);
  core::parallel_for(students.size(), threads, [&](std::size_t k) {
    const int i = students[k];
    const auto row = matrix.row(i);
    if (row.empty()) {
      skipped[k] = 1;
      return;
    }
    const auto split = data::hold_out_targets(row, 1.0 - conditioning_fraction,
                                              core::derive_seed(seed, {static_cast<std::uint64_t>(i), 0}));
    const auto p = imputer.predict(split.conditioning, core::derive_seed(seed, {static_cast<std::uint64_t>(i), 1}));
    if (static_cast<int>(p.size()) != matrix.num_questions())
      throw ConfigError("evaluate_imputation: imputer returned wrong number of predictions");
    for (const auto& a : split.targets) {
      preds[k].push_back(p[static_cast<std::size_t>(a.question)]);
      labels[k].push_back(a.value);
    }
  });

  std::vector<double> all_preds;
  std::vector<int> all_labels;
  std::size_t skipped_count = 0;
  for (std::size_t k = 0; k < students.size(); ++k) {
    skipped_count += skipped[k];
    all_preds.insert(all_preds.end(), preds[k].begin(), preds[k].end());
    all_labels.insert(all_labels.end(), labels[k].begin(), labels[k].end());
  }
  ImputationScore score = score_predictions(all_preds, all_labels, threshold);
  score.num_students = students.size() - skipped_count;
  score.skipped_students = skipped_count;
  return score;
}

}  // namespace qinsight::pvae
