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

#include <cstdint>
#include <span>
#include <vector>

#include "qinsight/core/tensor.hpp"

namespace qinsight::core {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moment accumulators for one parameter list, in the list's order.
struct AdamState {
  AdamOptions options;
  std::vector<Matrix> first_moment;
  std::vector<Matrix> second_moment;
  std::int64_t step = 0;
};

AdamState make_adam_state(std::span<ParamTensor* const> params, const AdamOptions& options);

/// One bias-corrected Adam update using each parameter's gradient slot.
/// Gradients are validated before anything is modified; a non-finite
/// gradient throws NumericalError and leaves params and state untouched.
void adam_step(std::span<ParamTensor* const> params, AdamState& state);

}  // namespace qinsight::core
