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

#include "qinsight/data/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qinsight/core/error.hpp"

namespace qinsight::data {

StudentSplit split_students(int num_students, const SplitRatios& ratios, std::uint64_t seed) {
  if (!(ratios.train > 0.0 && ratios.validation > 0.0 && ratios.test > 0.0))
    throw ConfigError("split_students: ratios must be positive");
  if (std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9)
    throw ConfigError("split_students: ratios must sum to 1");
  const int n_val = static_cast<int>(std::lround(ratios.validation * num_students));
  const int n_test = static_cast<int>(std::lround(ratios.test * num_students));
  const int n_train = num_students - n_val - n_test;
  if (n_val <= 0 || n_test <= 0 || n_train <= 0)
    throw ConfigError("split_students: " + std::to_string(num_students) + " students leave an empty split");

  std::vector<int> order(static_cast<std::size_t>(num_students));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  StudentSplit split;
  split.train.assign(order.begin(), order.begin() + n_train);
  split.validation.assign(order.begin() + n_train, order.begin() + n_train + n_val);
  split.test.assign(order.begin() + n_train + n_val, order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

HeldOut hold_out_targets(std::span<const Answer> row, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("hold_out_targets: fraction must lie in (0, 1)");
  if (row.empty()) throw ConfigError("hold_out_targets: empty row");
  const std::size_t n = row.size();
  const std::size_t n_targets =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n))), 1, n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> is_target(n, false);
  for (std::size_t k = 0; k < n_targets; ++k) is_target[order[k]] = true;

  HeldOut out;
  for (std::size_t k = 0; k < n; ++k) (is_target[k] ? out.targets : out.conditioning).push_back(row[k]);
  return out;
}

}  // namespace qinsight::data
