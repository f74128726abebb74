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

#include "qinsight/pvae/model.hpp"

#include <algorithm>
#include <cmath>

#include "qinsight/core/error.hpp"
#include "qinsight/core/random.hpp"

namespace qinsight::pvae {

using core::Index;
using core::Matrix;
using core::Tape;
using core::Var;
using core::Vector;

void ModelConfig::validate() const {
  if (num_questions < 1) throw ConfigError("model: num_questions must be >= 1");
  if (latent_dim < 1 || embedding_dim < 1 || point_dim < 1)
    throw ConfigError("model: latent, embedding and point dims must be >= 1");
  if (point_hidden < 0 || head_hidden < 0 || decoder_hidden < 0)
    throw ConfigError("model: hidden sizes must be >= 0");
}

Mlp::Mlp(const std::string& name, int input_dim, int hidden_dim, int output_dim) {
  if (hidden_dim > 0) {
    weights_.emplace_back(name + ".w0", hidden_dim, input_dim);
    biases_.emplace_back(name + ".b0", hidden_dim, 1);
    weights_.emplace_back(name + ".w1", output_dim, hidden_dim);
    biases_.emplace_back(name + ".b1", output_dim, 1);
  } else {
    weights_.emplace_back(name + ".w0", output_dim, input_dim);
    biases_.emplace_back(name + ".b0", output_dim, 1);
  }
}

Matrix Mlp::forward(const Matrix& x) const {
  Matrix h = x;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    if (h.cols() != weights_[k].cols())
      throw ConfigError("Mlp: input width " + std::to_string(h.cols()) + " != " + std::to_string(weights_[k].cols()));
    Matrix out = h * weights_[k].value().transpose();
    out.rowwise() += biases_[k].value().col(0).transpose();
    if (k + 1 < weights_.size()) out = out.array().tanh().matrix();
    h = std::move(out);
  }
  return h;
}

Var Mlp::forward(Tape& tape, Var x) {
  Var h = x;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    h = core::affine(tape, h, tape.param(weights_[k]), tape.param(biases_[k]));
    if (k + 1 < weights_.size()) h = core::tanh(tape, h);
  }
  return h;
}

void Mlp::initialize(std::mt19937_64& rng) {
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    weights_[k].init_normal(rng, static_cast<double>(weights_[k].cols()));
    biases_[k].set_value(Matrix::Zero(biases_[k].rows(), 1));
  }
}

std::vector<core::ParamTensor*> Mlp::parameters() {
  std::vector<core::ParamTensor*> out;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    out.push_back(&weights_[k]);
    out.push_back(&biases_[k]);
  }
  return out;
}

std::vector<const core::ParamTensor*> Mlp::parameters() const {
  std::vector<const core::ParamTensor*> out;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    out.push_back(&weights_[k]);
    out.push_back(&biases_[k]);
  }
  return out;
}

PVae::PVae(const ModelConfig& config) : config_(config) {
  config_.validate();
  embedding_ = core::ParamTensor("embedding", config_.num_questions, config_.embedding_dim);
  question_bias_ = core::ParamTensor("question_bias", config_.num_questions, 1);
  point_net_ = Mlp("point", config_.point_input_dim(), config_.point_hidden, config_.point_dim);
  head_ = Mlp("head", config_.point_dim, config_.head_hidden, 2 * config_.latent_dim);
  decoder_ = Mlp("decoder", config_.latent_dim, config_.decoder_hidden, config_.num_questions);
}

void PVae::initialize(std::uint64_t seed, const data::AnswerMatrix* matrix, std::span<const int> rows) {
  std::mt19937_64 rng(core::derive_seed(seed, {0x1417}));
  embedding_.init_normal(rng, 1.0);
  point_net_.initialize(rng);
  head_.initialize(rng);
  decoder_.initialize(rng);
  Matrix bias = Matrix::Zero(config_.num_questions, 1);
  if (matrix != nullptr) {
    if (matrix->num_questions() != config_.num_questions)
      throw ConfigError("initialize: matrix has " + std::to_string(matrix->num_questions()) + " questions, model " +
                        std::to_string(config_.num_questions));
    std::vector<double> correct(static_cast<std::size_t>(config_.num_questions), 0.0);
    std::vector<double> count(static_cast<std::size_t>(config_.num_questions), 0.0);
    const auto visit = [&](int i) {
      for (const Answer& a : matrix->row(i)) {
        correct[static_cast<std::size_t>(a.question)] += a.value;
        count[static_cast<std::size_t>(a.question)] += 1.0;
      }
    };
    if (rows.empty()) {
      for (int i = 0; i < matrix->num_students(); ++i) visit(i);
    } else {
      for (int i : rows) visit(i);
    }
    for (int j = 0; j < config_.num_questions; ++j) {
      const auto js = static_cast<std::size_t>(j);
      if (count[js] == 0.0) continue;
      const double rate = std::clamp(correct[js] / count[js], 1e-6, 1.0 - 1e-6);
      bias(j, 0) = std::clamp(std::log(rate / (1.0 - rate)), -3.0, 3.0);
    }
  }
  question_bias_.set_value(bias);
}

Matrix PVae::point_inputs(std::span<const Answer> answers) const {
  const int c = config_.embedding_dim;
  Matrix s(static_cast<Index>(answers.size()), c + 2);
  for (std::size_t k = 0; k < answers.size(); ++k) {
    const Answer& a = answers[k];
    if (a.question < 0 || a.question >= config_.num_questions)
      throw ConfigError("encode: question index " + std::to_string(a.question) + " out of range");
    const auto r = static_cast<Index>(k);
    const double x = static_cast<double>(a.value);
    s(r, 0) = x;
    s.row(r).segment(1, c) = x * embedding_.value().row(a.question);
    s(r, c + 1) = question_bias_.value()(a.question, 0);
  }
  return s;
}

Matrix PVae::point_features(std::span<const Answer> answers) const {
  return point_net_.forward(point_inputs(answers));
}

Vector PVae::aggregate(std::span<const Answer> answers) const {
  const auto canonical = data::canonical_answers(answers, config_.num_questions);
  Vector agg = Vector::Zero(config_.point_dim);
  if (canonical.empty()) return agg;
  const Matrix h = point_features(canonical);
  for (Index r = 0; r < h.rows(); ++r) agg += h.row(r).transpose();
  return agg;
}

std::vector<core::DiagGaussian> PVae::posteriors_from_aggregates(const Matrix& aggregates) const {
  const Matrix out = head_.forward(aggregates);
  const Index k = config_.latent_dim;
  std::vector<core::DiagGaussian> result;
  result.reserve(static_cast<std::size_t>(out.rows()));
  for (Index r = 0; r < out.rows(); ++r) {
    Vector mean = out.row(r).segment(0, k).transpose();
    Vector stddev = out.row(r).segment(k, k).transpose().unaryExpr([](double v) { return core::softplus(v); });
    stddev.array() += core::kStddevFloor;
    result.emplace_back(std::move(mean), std::move(stddev));
  }
  return result;
}

core::DiagGaussian PVae::posterior_from_aggregate(const Vector& aggregate) const {
  if (aggregate.size() != config_.point_dim) throw ConfigError("posterior: aggregate length mismatch");
  return std::move(posteriors_from_aggregates(aggregate.transpose()).front());
}

core::DiagGaussian PVae::encode(std::span<const Answer> observed) const {
  return posterior_from_aggregate(aggregate(observed));
}

Matrix PVae::decoder_logits(const Matrix& z) const {
  if (z.cols() != config_.latent_dim) throw ConfigError("decode: latent width mismatch");
  return decoder_.forward(z);
}

Vector PVae::decode(const Vector& z) const {
  const Matrix logits = decoder_logits(z.transpose());
  return logits.row(0).transpose().unaryExpr([](double v) { return core::sigmoid(v); });
}

Vector PVae::impute_with_noise(const core::DiagGaussian& posterior, const Matrix& noise) const {
  if (noise.cols() != config_.latent_dim || noise.rows() < 1) throw ConfigError("impute: bad noise shape");
  Matrix z = noise * posterior.stddev().asDiagonal();
  z.rowwise() += posterior.mean().transpose();
  const Matrix probs = decoder_logits(z).unaryExpr([](double v) { return core::sigmoid(v); });
  Vector mean = Vector::Zero(config_.num_questions);
  for (Index r = 0; r < probs.rows(); ++r) mean += probs.row(r).transpose();
  return mean / static_cast<double>(probs.rows());
}

Vector PVae::impute(std::span<const Answer> observed, int samples, std::uint64_t seed) const {
  if (samples < 1) throw ConfigError("impute: need at least one sample");
  std::mt19937_64 rng(seed);
  const Matrix noise = core::standard_normal(samples, config_.latent_dim, rng);
  return impute_with_noise(encode(observed), noise);
}

double PVae::partial_elbo(std::span<const Answer> encoder_input, std::span<const Answer> likelihood,
                          const Matrix& noise) const {
  if (noise.cols() != config_.latent_dim || noise.rows() < 1) throw ConfigError("partial_elbo: bad noise shape");
  const auto post = encode(encoder_input);
  const auto targets = data::canonical_answers(likelihood, config_.num_questions);
  double loglik = 0.0;
  for (Index l = 0; l < noise.rows(); ++l) {
    const Vector z = core::reparam_sample(post, noise.row(l).transpose());
    const Matrix logits = decoder_logits(z.transpose());
    double ll = 0.0;
    for (const Answer& a : targets) {
      const double v = logits(0, a.question);
      ll += a.value * v - core::softplus(v);
    }
    loglik += ll;
  }
  loglik /= static_cast<double>(noise.rows());
  return loglik - core::kl_to_standard(post);
}

double PVae::full_elbo(const Vector& dense_row, const Matrix& noise) const {
  if (dense_row.size() != config_.num_questions) throw ConfigError("full_elbo: row length mismatch");
  std::vector<Answer> row;
  for (int j = 0; j < config_.num_questions; ++j) {
    const double v = dense_row(j);
    if (v != 0.0 && v != 1.0) throw ConfigError("full_elbo: entries must be 0 or 1");
    row.push_back({j, static_cast<int>(v)});
  }
  return partial_elbo(row, row, noise);
}

std::vector<core::ParamTensor*> PVae::parameters() {
  std::vector<core::ParamTensor*> out{&embedding_, &question_bias_};
  for (auto* nets : {&point_net_, &head_, &decoder_})
    for (auto* p : nets->parameters()) out.push_back(p);
  return out;
}

std::vector<const core::ParamTensor*> PVae::parameters() const {
  std::vector<const core::ParamTensor*> out{&embedding_, &question_bias_};
  for (const auto* nets : {&point_net_, &head_, &decoder_})
    for (const auto* p : nets->parameters()) out.push_back(p);
  return out;
}

BatchElbo record_batch_elbo(Tape& tape, PVae& model, std::span<const BatchRow> rows, std::span<const Matrix> noise) {
  const ModelConfig& cfg = model.config();
  const auto batch = static_cast<Index>(rows.size());
  if (batch == 0) throw ConfigError("record_batch_elbo: empty batch");
  if (noise.empty()) throw ConfigError("record_batch_elbo: need at least one noise sample");
  for (const Matrix& n : noise)
    if (n.rows() != batch || n.cols() != cfg.latent_dim) throw ConfigError("record_batch_elbo: noise shape mismatch");

  // h(s) depends only on (question, value), so the point net runs once per
  // distinct pair in the batch and answers gather from those rows.
  std::vector<int> slot(2 * static_cast<std::size_t>(cfg.num_questions), -1);
  std::vector<int> enc_key;
  std::vector<int> enc_segment;
  std::vector<int> lik_row;
  std::vector<int> lik_col;
  std::vector<double> lik_value;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const Answer& a : data::canonical_answers(rows[r].encoder_input, cfg.num_questions)) {
      enc_key.push_back(2 * a.question + a.value);
      enc_segment.push_back(static_cast<int>(r));
      slot[static_cast<std::size_t>(enc_key.back())] = 0;
    }
    for (const Answer& a : data::canonical_answers(rows[r].likelihood, cfg.num_questions)) {
      lik_row.push_back(static_cast<int>(r));
      lik_col.push_back(a.question);
      lik_value.push_back(a.value);
    }
  }

  Var agg;
  if (enc_key.empty()) {
    agg = tape.constant(Matrix::Zero(batch, cfg.point_dim));
  } else {
    std::vector<int> pair_question;
    std::vector<double> pair_value;
    for (std::size_t key = 0; key < slot.size(); ++key) {
      if (slot[key] < 0) continue;
      slot[key] = static_cast<int>(pair_question.size());
      pair_question.push_back(static_cast<int>(key / 2));
      pair_value.push_back(static_cast<double>(key % 2));
    }
    std::vector<int> enc_pair(enc_key.size());
    for (std::size_t k = 0; k < enc_key.size(); ++k) enc_pair[k] = slot[static_cast<std::size_t>(enc_key[k])];

    const Vector x = Eigen::Map<const Vector>(pair_value.data(), static_cast<Index>(pair_value.size()));
    Var emb = core::gather_rows(tape, tape.param(model.embedding()), pair_question);
    Var bias = core::gather_rows(tape, tape.param(model.question_bias()), pair_question);
    const Var parts[] = {tape.constant(Matrix(x)), core::scale_rows(tape, emb, x), bias};
    Var s = core::concat_cols(tape, parts);
    Var h = model.point_net().forward(tape, s);
    agg = core::segment_sum(tape, core::gather_rows(tape, h, enc_pair), enc_segment, batch);
  }
  Var head = model.head().forward(tape, agg);
  Var mean = core::slice_cols(tape, head, 0, cfg.latent_dim);
  Var raw = core::slice_cols(tape, head, cfg.latent_dim, cfg.latent_dim);
  Var stddev = core::add_scalar(tape, core::softplus(tape, raw), core::kStddevFloor);

  const Matrix targets = Eigen::Map<const Vector>(lik_value.data(), static_cast<Index>(lik_value.size()));
  Var loglik;
  for (std::size_t l = 0; l < noise.size(); ++l) {
    Var z = core::add(tape, mean, core::mul(tape, stddev, tape.constant(noise[l])));
    Var logits = model.decoder().forward(tape, z);
    Var picked = core::gather_elements(tape, logits, lik_row, lik_col);
    Var ll = core::bernoulli_log_likelihood(tape, picked, targets);
    loglik = l == 0 ? ll : core::add(tape, loglik, ll);
  }
  if (noise.size() > 1) loglik = core::scale(tape, loglik, 1.0 / static_cast<double>(noise.size()));

  const Index k = cfg.latent_dim;
  Var kl = core::gaussian_kl(tape, mean, stddev, tape.constant(Matrix::Zero(batch, k)),
                             tape.constant(Matrix::Ones(batch, k)));
  return BatchElbo{core::sub(tape, loglik, kl), loglik, kl};
}

}  // namespace qinsight::pvae
