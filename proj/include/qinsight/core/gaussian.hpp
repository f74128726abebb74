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

#pragma once

#include <random>

#include "qinsight/core/tensor.hpp"

namespace qinsight::core {

// Diagonal Gaussian N(mean, diag(stddev^2)).
class DiagGaussian {
 public:
  DiagGaussian(Vector mean, Vector stddev);
  static DiagGaussian standard(Index dim);

  const Vector& mean() const { return mean_; }
  const Vector& stddev() const { return stddev_; }
  Index dim() const { return mean_.size(); }

 private:
  Vector mean_;
  Vector stddev_;
};

// KL[q || p] in closed form. Each per-dimension term is clamped at zero, so
// rounding can never produce a negative divergence; identical arguments give 0.
double gaussian_kl(const DiagGaussian& q, const DiagGaussian& p);

// KL[q || N(0, I)].
double kl_to_standard(const DiagGaussian& q);

// z = mean + stddev * noise
Vector reparam_sample(const DiagGaussian& g, const Vector& noise);

Vector standard_normal(Index dim, std::mt19937_64& rng);
Matrix standard_normal(Index rows, Index cols, std::mt19937_64& rng);

}  // namespace qinsight::core
