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

#include "qinsight/core/autodiff.hpp"

#include <cmath>
#include <string>

#include "qinsight/core/error.hpp"

namespace qinsight::core {

namespace {

std::string shape_of(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ConfigError(std::string(op) + ": shape mismatch " + shape_of(a) + " vs " + shape_of(b));
}

}  // namespace

Var Tape::push(Matrix value, BackwardFn fn) {
  Node node;
  node.value = std::move(value);
  node.requires_grad = static_cast<bool>(fn);
  node.backward = std::move(fn);
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Tape::constant(Matrix value) { return push(std::move(value), nullptr); }

Var Tape::param(ParamTensor& p) {
  return push(p.value(), [&p](Tape&, const Matrix& g) { p.mutable_grad() += g; });
}

double Tape::scalar(Var v) const {
  const Matrix& m = value(v);
  if (m.size() != 1) throw ConfigError("Tape::scalar: node is " + shape_of(m) + ", not 1x1");
  return m(0, 0);
}

void Tape::accumulate(Var v, const Matrix& delta) {
  Node& node = nodes_.at(v.id);
  if (!node.requires_grad) return;
  if (node.grad.size() == 0) {
    node.grad = delta;
  } else {
    node.grad += delta;
  }
}

void Tape::backward(Var loss) {
  if (value(loss).size() != 1) throw ConfigError("backward: root must be a 1x1 scalar, got " + shape_of(value(loss)));
  if (!std::isfinite(value(loss)(0, 0))) throw NumericalError("backward: non-finite loss");
  for (auto& n : nodes_) n.grad.resize(0, 0);
  accumulate(loss, Matrix::Ones(1, 1));
  for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
    Node& node = nodes_[i];
    if (!node.backward || node.grad.size() == 0) continue;
    // The callback may touch other nodes; copy out the gradient first.
    const Matrix g = node.grad;
    node.backward(*this, g);
  }
}

Var affine(Tape& t, Var x, Var w, Var b) {
  const Matrix& xv = t.value(x);
  const Matrix& wv = t.value(w);
  const Matrix& bv = t.value(b);
  if (wv.cols() != xv.cols())
    throw ConfigError("affine: weight columns " + std::to_string(wv.cols()) + " != input width " +
                      std::to_string(xv.cols()));
  if (bv.rows() != wv.rows() || bv.cols() != 1)
    throw ConfigError("affine: bias " + shape_of(bv) + " incompatible with weight " + shape_of(wv));
  Matrix out = xv * wv.transpose();
  out.rowwise() += bv.col(0).transpose();
  Tape::BackwardFn fn;
  if (t.requires_grad(x) || t.requires_grad(w) || t.requires_grad(b)) {
    fn = [x, w, b](Tape& tp, const Matrix& g) {
      if (tp.requires_grad(x)) tp.accumulate(x, g * tp.value(w));
      if (tp.requires_grad(w)) tp.accumulate(w, g.transpose() * tp.value(x));
      if (tp.requires_grad(b)) tp.accumulate(b, g.colwise().sum().transpose());
    };
  }
  return t.push(std::move(out), std::move(fn));
}

Var tanh(Tape& t, Var x) {
  Matrix out = t.value(x).array().tanh().matrix();
  Tape::BackwardFn fn;
  if (t.requires_grad(x)) {
    fn = [x, out](Tape& tp, const Matrix& g) {
      tp.accumulate(x, (g.array() * (1.0 - out.array().square())).matrix());
    };
  }
  return t.push(std::move(out), std::move(fn));
}

Var sigmoid(Tape& t, Var x) {
  Matrix out = t.value(x).unaryExpr([](double v) { return core::sigmoid(v); });
  Tape::BackwardFn fn;
  if (t.requires_grad(x)) {
    fn = [x, out](Tape& tp, const Matrix& g) {
      tp.accumulate(x, (g.array() * out.array() * (1.0 - out.array())).matrix());
    };
  }
  return t.push(std::move(out), std::move(fn));
}

Var softplus(Tape& t, Var x) {
  Matrix out = t.value(x).unaryExpr([](double v) { return core::softplus(v); });
  Tape::BackwardFn fn;
  if (t.requires_grad(x)) {
    fn = [x](Tape& tp, const Matrix& g) {
      Matrix d = tp.value(x).unaryExpr([](double v) { return core::sigmoid(v); });
      tp.accumulate(x, (g.array() * d.array()).matrix());
    };
  }
  return t.push(std::move(out), std::move(fn));
}

Var add(Tape& t, Var a, Var b) {
  require_same_shape(t.value(a), t.value(b), "add");
  Matrix out = t.value(a) + t.value(b);
  Tape::BackwardFn fn;
  if (t.requires_grad(a) || t.requires_grad(b)) {
    fn = [a, b](Tape& tp, const Matrix& g) {
      tp.accumulate(a, g);
      tp.accumulate(b, g);
    };
  }
  return t.push(std::move(out), std::move(fn));
}

Var sub(Tape& t, Var a, Var b) {
  require_same_shape(t.value(a), t.value(b), "sub");
  Matrix out = t.value(a) - t.value(b);
  Tape::BackwardFn fn;
  if (t.requires_grad(a) || t.requires_grad(b)) {
    fn = [a, b](Tape& tp, const Matrix& g) {
      tp.accumulate(a, g);
      if (tp.requires_grad(b)) tp.accumulate(b, -g);
    };
  }
  return t.push(std::move(out), std::move(fn));
}

Var mul(Tape& t, Var a, Var b) {
  require_same_shape(t.value(a), t.value(b), "mul");
  Matrix out = (t.value(a).array() * t.value(b).array()).matrix();
  Tape::BackwardFn fn;
  if (t.requires_grad(a) || t.requires_grad(b)) {
    fn = [a, b](Tape& tp, const Matrix& g) {
      if (tp.requires_grad(a)) tp.accumulate(a, (g.array() * tp.value(b).array()).matrix());
      if (tp.requires_grad(b)) tp.accumulate(b, (g.array() * tp.value(a).array()).matrix());
    };
  }
  return t.push(std::move(out), std::move(fn));
}

Var scale(Tape& t, Var x, double factor) {
  Matrix out = t.value(x) * factor;
  Tape::BackwardFn fn;
  if (t.requires_grad(x)) fn = [x, factor](Tape& tp, const Matrix& g) { tp.accumulate(x, g * factor); };
  return t.push(std::move(out), std::move(fn));
}

Var add_scalar(Tape& t, Var x, double offset) {
  Matrix out = t.value(x).array() + offset;
  Tape::BackwardFn fn;
  if (t.requires_grad(x)) fn = [x](Tape& tp, const Matrix& g) { tp.accumulate(x, g); };
  return t.push(std::move(out), std::move(fn));
}

Var sum(Tape& t, Var x) {
  const Matrix& xv = t.value(x);
  double total = 0.0;
  for (Index c = 0; c < xv.cols(); ++c)
    for (Index r = 0; r < xv.rows(); ++r) total += xv(r, c);
  Tape::BackwardFn fn;
  if (t.requires_grad(x)) {
    fn = [x](Tape& tp, const Matrix& g) {
      const Matrix& v = tp.value(x);
      tp.accumulate(x, Matrix::Constant(v.rows(), v.cols(), g(0, 0)));
    };
  }
  return t.push(Matrix::Constant(1, 1, total), std::move(fn));
}

Var gather_rows(Tape& t, Var src, std::span<const int> rows) {
  const Matrix& sv = t.value(src);
  Matrix out(static_cast<Index>(rows.size()), sv.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= sv.rows())
      throw ConfigError("gather_rows: row " + std::to_string(rows[k]) + " out of range " + shape_of(sv));
    out.row(static_cast<Index>(k)) = sv.row(rows[k]);
  }
  Tape::BackwardFn fn;
  if (t.requires_grad(src)) {
    std::vector<int> idx(rows.begin(), rows.end());
    fn = [src, idx = std::move(idx)](Tape& tp, const Matrix& g) {
      const Matrix& v = tp.value(src);
      Matrix d = Matrix::Zero(v.rows(), v.cols());
      for (std::size_t k = 0; k < idx.size(); ++k) d.row(idx[k]) += g.row(static_cast<Index>(k));
      tp.accumulate(src, d);
    };
  }
  return t.push(std::move(out), std::move(fn));
}

Var scale_rows(Tape& t, Var x, const Vector& weights) {
  const Matrix& xv = t.value(x);
  if (weights.size() != xv.rows())
    throw ConfigError("scale_rows: " + std::to_string(weights.size()) + " weights for " + shape_of(xv));
  Matrix out = weights.asDiagonal() * xv;
  Tape::BackwardFn fn;
  if (t.requires_grad(x)) {
    fn = [x, weights](Tape& tp, const Matrix& g) { tp.accumulate(x, weights.asDiagonal() * g); };
  }
  return t.push(std::move(out), std::move(fn));
}

Var concat_cols(Tape& t, std::span<const Var> parts) {
  if (parts.empty()) throw ConfigError("concat_cols: no inputs");
  const Index rows = t.value(parts[0]).rows();
  Index cols = 0;
  bool rg = false;
  for (Var p : parts) {
    if (t.value(p).rows() != rows) throw ConfigError("concat_cols: row count mismatch");
    cols += t.value(p).cols();
    rg = rg || t.requires_grad(p);
  }
  Matrix out(rows, cols);
  Index offset = 0;
  for (Var p : parts) {
    out.middleCols(offset, t.value(p).cols()) = t.value(p);
    offset += t.value(p).cols();
  }
  Tape::BackwardFn fn;
  if (rg) {
    std::vector<Var> inputs(parts.begin(), parts.end());
    fn = [inputs = std::move(inputs)](Tape& tp, const Matrix& g) {
      Index off = 0;
      for (Var p : inputs) {
        const Index w = tp.value(p).cols();
        if (tp.requires_grad(p)) tp.accumulate(p, g.middleCols(off, w));
        off += w;
      }
    };
  }
  return t.push(std::move(out), std::move(fn));
}

Var slice_cols(Tape& t, Var x, Index start, Index count) {
  const Matrix& xv = t.value(x);
  if (start < 0 || count < 0 || start + count > xv.cols())
    throw ConfigError("slice_cols: range out of bounds for " + shape_of(xv));
  Matrix out = xv.middleCols(start, count);
  Tape::BackwardFn fn;
  if (t.requires_grad(x)) {
    fn = [x, start, count](Tape& tp, const Matrix& g) {
      const Matrix& v = tp.value(x);
      Matrix d = Matrix::Zero(v.rows(), v.cols());
      d.middleCols(start, count) = g;
      tp.accumulate(x, d);
    };
  }
  return t.push(std::move(out), std::move(fn));
}

Var segment_sum(Tape& t, Var x, std::span<const int> segment, Index num_segments) {
  const Matrix& xv = t.value(x);
  if (static_cast<Index>(segment.size()) != xv.rows())
    throw ConfigError("segment_sum: " + std::to_string(segment.size()) + " segment ids for " + shape_of(xv));
  Matrix out = Matrix::Zero(num_segments, xv.cols());
  for (Index r = 0; r < xv.rows(); ++r) {
    const int s = segment[static_cast<std::size_t>(r)];
    if (s < 0 || s >= num_segments) throw ConfigError("segment_sum: segment id out of range");
    out.row(s) += xv.row(r);
  }
  Tape::BackwardFn fn;
  if (t.requires_grad(x)) {
    std::vector<int> seg(segment.begin(), segment.end());
    fn = [x, seg = std::move(seg)](Tape& tp, const Matrix& g) {
      Matrix d(static_cast<Index>(seg.size()), g.cols());
      for (std::size_t r = 0; r < seg.size(); ++r) d.row(static_cast<Index>(r)) = g.row(seg[r]);
      tp.accumulate(x, d);
    };
  }
  return t.push(std::move(out), std::move(fn));
}

Var gather_elements(Tape& t, Var x, std::span<const int> rows, std::span<const int> cols) {
  if (rows.size() != cols.size()) throw ConfigError("gather_elements: index length mismatch");
  const Matrix& xv = t.value(x);
  Matrix out(static_cast<Index>(rows.size()), 1);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= xv.rows() || cols[k] < 0 || cols[k] >= xv.cols())
      throw ConfigError("gather_elements: index out of range for " + shape_of(xv));
    out(static_cast<Index>(k), 0) = xv(rows[k], cols[k]);
  }
  Tape::BackwardFn fn;
  if (t.requires_grad(x)) {
    std::vector<int> r(rows.begin(), rows.end());
    std::vector<int> c(cols.begin(), cols.end());
    fn = [x, r = std::move(r), c = std::move(c)](Tape& tp, const Matrix& g) {
      const Matrix& v = tp.value(x);
      Matrix d = Matrix::Zero(v.rows(), v.cols());
      for (std::size_t k = 0; k < r.size(); ++k) d(r[k], c[k]) += g(static_cast<Index>(k), 0);
      tp.accumulate(x, d);
    };
  }
  return t.push(std::move(out), std::move(fn));
}

Var bernoulli_log_likelihood(Tape& t, Var logits, const Matrix& targets) {
  const Matrix& lv = t.value(logits);
  require_same_shape(lv, targets, "bernoulli_log_likelihood");
  double total = 0.0;
  for (Index c = 0; c < lv.cols(); ++c)
    for (Index r = 0; r < lv.rows(); ++r) total += targets(r, c) * lv(r, c) - core::softplus(lv(r, c));
  Tape::BackwardFn fn;
  if (t.requires_grad(logits)) {
    fn = [logits, targets](Tape& tp, const Matrix& g) {
      Matrix p = tp.value(logits).unaryExpr([](double v) { return core::sigmoid(v); });
      tp.accumulate(logits, (targets - p) * g(0, 0));
    };
  }
  return t.push(Matrix::Constant(1, 1, total), std::move(fn));
}

Var gaussian_kl(Tape& t, Var mean_q, Var stddev_q, Var mean_p, Var stddev_p) {
  const Matrix& mq = t.value(mean_q);
  const Matrix& sq = t.value(stddev_q);
  const Matrix& mp = t.value(mean_p);
  const Matrix& sp = t.value(stddev_p);
  require_same_shape(mq, sq, "gaussian_kl");
  require_same_shape(mq, mp, "gaussian_kl");
  require_same_shape(mq, sp, "gaussian_kl");
  if ((sq.array() <= 0.0).any() || (sp.array() <= 0.0).any())
    throw ConfigError("gaussian_kl: standard deviations must be strictly positive");
  double total = 0.0;
  for (Index c = 0; c < mq.cols(); ++c) {
    for (Index r = 0; r < mq.rows(); ++r) {
      const double d = mq(r, c) - mp(r, c);
      const double vq = sq(r, c) * sq(r, c);
      const double vp = sp(r, c) * sp(r, c);
      total += std::log(sp(r, c) / sq(r, c)) + (vq + d * d) / (2.0 * vp) - 0.5;
    }
  }
  Tape::BackwardFn fn;
  if (t.requires_grad(mean_q) || t.requires_grad(stddev_q) || t.requires_grad(mean_p) || t.requires_grad(stddev_p)) {
    fn = [=](Tape& tp, const Matrix& g) {
      const double s = g(0, 0);
      const Eigen::ArrayXXd d = (tp.value(mean_q) - tp.value(mean_p)).array();
      const Eigen::ArrayXXd sqa = tp.value(stddev_q).array();
      const Eigen::ArrayXXd spa = tp.value(stddev_p).array();
      const Eigen::ArrayXXd vp = spa.square();
      if (tp.requires_grad(mean_q)) tp.accumulate(mean_q, (s * d / vp).matrix());
      if (tp.requires_grad(mean_p)) tp.accumulate(mean_p, (-s * d / vp).matrix());
      if (tp.requires_grad(stddev_q)) tp.accumulate(stddev_q, (s * (-1.0 / sqa + sqa / vp)).matrix());
      if (tp.requires_grad(stddev_p))
        tp.accumulate(stddev_p, (s * (1.0 / spa - (sqa.square() + d.square()) / (vp * spa))).matrix());
    };
  }
  return t.push(Matrix::Constant(1, 1, total), std::move(fn));
}

}  // namespace qinsight::core
