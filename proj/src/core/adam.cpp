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

#include "qinsight/core/adam.hpp"

#include <cmath>
#include <string>

#include "qinsight/core/error.hpp"

namespace qinsight::core {

AdamState make_adam_state(std::span<ParamTensor* const> params, const AdamOptions& options) {
  if (!(options.learning_rate > 0.0) || !(options.beta1 >= 0.0 && options.beta1 < 1.0) ||
      !(options.beta2 >= 0.0 && options.beta2 < 1.0) || !(options.epsilon > 0.0)) {
    throw ConfigError("Adam: invalid hyperparameters");
  }
  AdamState state;
  state.options = options;
  for (const ParamTensor* p : params) {
    state.first_moment.push_back(Matrix::Zero(p->rows(), p->cols()));
    state.second_moment.push_back(Matrix::Zero(p->rows(), p->cols()));
  }
  return state;
}

void adam_step(std::span<ParamTensor* const> params, AdamState& state) {
  if (params.size() != state.first_moment.size())
    throw ConfigError("Adam: state tracks " + std::to_string(state.first_moment.size()) + " parameters, got " +
                      std::to_string(params.size()));
  for (std::size_t k = 0; k < params.size(); ++k) {
    const ParamTensor& p = *params[k];
    if (state.first_moment[k].rows() != p.rows() || state.first_moment[k].cols() != p.cols())
      throw ConfigError("Adam: moment shape mismatch for '" + p.name() + "'");
    if (!p.grad().allFinite()) throw NumericalError("Adam: non-finite gradient in '" + p.name() + "'");
  }

  const AdamOptions& o = state.options;
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(o.beta1, t);
  const double correction2 = 1.0 - std::pow(o.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    ParamTensor& p = *params[k];
    Matrix& m = state.first_moment[k];
    Matrix& v = state.second_moment[k];
    const Matrix& g = p.grad();
    m = o.beta1 * m + (1.0 - o.beta1) * g;
    v = o.beta2 * v + (1.0 - o.beta2) * g.cwiseProduct(g);
    auto value = p.mutable_value();
    value.array() -= o.learning_rate * (m.array() / correction1) / ((v.array() / correction2).sqrt() + o.epsilon);
    if (!p.all_finite()) throw NumericalError("Adam: parameter '" + p.name() + "' became non-finite");
  }
}

}  // namespace qinsight::core
