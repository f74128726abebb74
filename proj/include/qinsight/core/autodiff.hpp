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

#include <functional>
#include <span>
#include <vector>

#include "qinsight/core/tensor.hpp"

namespace qinsight::core {

class Tape;

// Handle to a node recorded on a Tape.
struct Var {
  int id = -1;
};

/// Reverse-mode recording of matrix-valued operations.
///
/// One tape is built per minibatch and discarded after `backward`. Nodes are
/// replayed in reverse insertion order, so gradients for a given tape are
/// accumulated in a fixed order and are bit-reproducible.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, const Matrix& out_grad)>;

  Var constant(Matrix value);
  // Leaf bound to a parameter; backward adds into the parameter's gradient slot.
  Var param(ParamTensor& p);

  const Matrix& value(Var v) const { return nodes_.at(v.id).value; }
  const Matrix& grad(Var v) const { return nodes_.at(v.id).grad; }
  double scalar(Var v) const;

  // Seeds d(loss)/d(loss) = 1 and replays the tape. `loss` must be 1x1.
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }

  // For op implementations.
  Var push(Matrix value, BackwardFn fn);
  void accumulate(Var v, const Matrix& delta);
  bool requires_grad(Var v) const { return nodes_.at(v.id).requires_grad; }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    BackwardFn backward;
    bool requires_grad = false;
  };
  std::vector<Node> nodes_;
};

// Rows are samples, columns are features throughout.

// x (n x in), w (out x in), b (out x 1) -> x w^T + 1 b^T  (n x out)
Var affine(Tape& t, Var x, Var w, Var b);
Var tanh(Tape& t, Var x);
Var sigmoid(Tape& t, Var x);
Var softplus(Tape& t, Var x);
Var add(Tape& t, Var a, Var b);
Var sub(Tape& t, Var a, Var b);
Var mul(Tape& t, Var a, Var b);
Var scale(Tape& t, Var x, double factor);
Var add_scalar(Tape& t, Var x, double offset);
Var sum(Tape& t, Var x);

Var gather_rows(Tape& t, Var src, std::span<const int> rows);
// Row r multiplied by weights[r].
Var scale_rows(Tape& t, Var x, const Vector& weights);
Var concat_cols(Tape& t, std::span<const Var> parts);
Var slice_cols(Tape& t, Var x, Index start, Index count);
// out(segment[r], :) += x(r, :), accumulated in row order.
Var segment_sum(Tape& t, Var x, std::span<const int> segment, Index num_segments);
// out(k) = x(rows[k], cols[k])  (n x 1)
Var gather_elements(Tape& t, Var x, std::span<const int> rows, std::span<const int> cols);

// sum_k [ y_k * l_k - softplus(l_k) ], i.e. sum of Bernoulli log-likelihoods given logits.
Var bernoulli_log_likelihood(Tape& t, Var logits, const Matrix& targets);
// Closed-form KL between diagonal Gaussians, summed over every entry.
Var gaussian_kl(Tape& t, Var mean_q, Var stddev_q, Var mean_p, Var stddev_p);

}  // namespace qinsight::core
