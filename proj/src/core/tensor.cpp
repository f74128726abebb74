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

#include "qinsight/core/tensor.hpp"

#include <cmath>

#include "qinsight/core/error.hpp"

namespace qinsight::core {

ParamTensor::ParamTensor(std::string name, Index rows, Index cols)
    : name_(std::move(name)), value_(Matrix::Zero(rows, cols)), grad_(Matrix::Zero(rows, cols)) {
  if (rows < 0 || cols < 0) throw ConfigError("ParamTensor '" + name_ + "': negative shape");
}

void ParamTensor::set_value(const Matrix& value) {
  if (value.rows() != value_.rows() || value.cols() != value_.cols()) {
    throw ConfigError("ParamTensor '" + name_ + "': shape mismatch in set_value (expected " +
                      std::to_string(value_.rows()) + "x" + std::to_string(value_.cols()) + ", got " +
                      std::to_string(value.rows()) + "x" + std::to_string(value.cols()) + ")");
  }
  value_ = value;
}

void ParamTensor::init_normal(std::mt19937_64& rng, double fan_in) {
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(std::max(fan_in, 1.0)));
  for (Index c = 0; c < value_.cols(); ++c)
    for (Index r = 0; r < value_.rows(); ++r) value_(r, c) = normal(rng);
}

}  // namespace qinsight::core
