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

#include "qinsight/core/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include "qinsight/core/error.hpp"

namespace qinsight::core {

DiagGaussian::DiagGaussian(Vector mean, Vector stddev) : mean_(std::move(mean)), stddev_(std::move(stddev)) {
  if (mean_.size() != stddev_.size()) throw ConfigError("DiagGaussian: mean and stddev lengths differ");
  if (!mean_.allFinite() || !stddev_.allFinite()) throw ConfigError("DiagGaussian: non-finite parameters");
  if ((stddev_.array() <= 0.0).any()) throw ConfigError("DiagGaussian: stddev must be strictly positive");
}

DiagGaussian DiagGaussian::standard(Index dim) { return DiagGaussian(Vector::Zero(dim), Vector::Ones(dim)); }

double gaussian_kl(const DiagGaussian& q, const DiagGaussian& p) {
  if (q.dim() != p.dim()) throw ConfigError("gaussian_kl: dimension mismatch");
  double total = 0.0;
  for (Index k = 0; k < q.dim(); ++k) {
    const double sq = q.stddev()(k);
    const double sp = p.stddev()(k);
    const double d = q.mean()(k) - p.mean()(k);
    const double term = std::log(sp / sq) + (sq * sq + d * d) / (2.0 * (sp * sp)) - 0.5;
    total += std::max(term, 0.0);
  }
  return total;
}

double kl_to_standard(const DiagGaussian& q) { return gaussian_kl(q, DiagGaussian::standard(q.dim())); }

Vector reparam_sample(const DiagGaussian& g, const Vector& noise) {
  if (noise.size() != g.dim()) throw ConfigError("reparam_sample: noise length mismatch");
  return g.mean() + g.stddev().cwiseProduct(noise);
}

Vector standard_normal(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector out(dim);
  for (Index k = 0; k < dim; ++k) out(k) = normal(rng);
  return out;
}

Matrix standard_normal(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) out(r, c) = normal(rng);
  return out;
}

}  // namespace qinsight::core
