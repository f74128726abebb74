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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace qinsight::core {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// A trainable parameter block with a gradient slot of identical shape.
///
/// The shape is fixed at construction; `set_value` refuses reshaping so the
/// gradient slot can never fall out of sync with the values.
class ParamTensor {
 public:
  ParamTensor() = default;
  ParamTensor(std::string name, Index rows, Index cols);

  const std::string& name() const { return name_; }
  Index rows() const { return value_.rows(); }
  Index cols() const { return value_.cols(); }
  Index size() const { return value_.size(); }

  const Matrix& value() const { return value_; }
  Eigen::Ref<Matrix> mutable_value() { return value_; }
  void set_value(const Matrix& value);

  const Matrix& grad() const { return grad_; }
  Eigen::Ref<Matrix> mutable_grad() { return grad_; }
  void zero_grad() { grad_.setZero(); }

  bool all_finite() const { return value_.allFinite(); }

  // Entries ~ N(0, 1/fan_in).
  void init_normal(std::mt19937_64& rng, double fan_in);

 private:
  std::string name_;
  Matrix value_;
  Matrix grad_;
};

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

// log sigmoid(x) = -softplus(-x)
inline double log_sigmoid(double x) { return -softplus(-x); }

// Lower bound added to softplus(raw) when producing standard deviations.
inline constexpr double kStddevFloor = 1e-4;

}  // namespace qinsight::core
