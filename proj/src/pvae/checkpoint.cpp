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

#include "qinsight/pvae/checkpoint.hpp"

#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "qinsight/core/error.hpp"

namespace qinsight::pvae {

namespace {

constexpr const char* kMagic = "qinsight-pvae-checkpoint";
constexpr int kVersion = 1;

std::string expect_token(std::istream& in, const char* what) {
  std::string tok;
  if (!(in >> tok)) throw DataError(std::string("checkpoint: truncated while reading ") + what);
  return tok;
}

double parse_double(const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size()) throw DataError("checkpoint: bad number '" + tok + "'");
  return v;
}

}  // namespace

void save_checkpoint(std::ostream& out, const PVae& model, const std::vector<std::string>& question_ids) {
  const ModelConfig& c = model.config();
  if (!question_ids.empty() && static_cast<int>(question_ids.size()) != c.num_questions)
    throw ConfigError("save_checkpoint: question id count does not match the model");
  out << kMagic << ' ' << kVersion << '\n';
  out << "num_questions " << c.num_questions << '\n'
      << "latent_dim " << c.latent_dim << '\n'
      << "embedding_dim " << c.embedding_dim << '\n'
      << "point_dim " << c.point_dim << '\n'
      << "point_hidden " << c.point_hidden << '\n'
      << "head_hidden " << c.head_hidden << '\n'
      << "decoder_hidden " << c.decoder_hidden << '\n';
  out << "question_ids " << question_ids.size() << '\n';
  for (const auto& id : question_ids) out << id << '\n';
  const auto params = model.parameters();
  out << "tensors " << params.size() << '\n';
  out << std::hexfloat;
  for (const core::ParamTensor* p : params) {
    out << "tensor " << p->name() << ' ' << p->rows() << ' ' << p->cols() << '\n';
    for (core::Index r = 0; r < p->rows(); ++r) {
      for (core::Index col = 0; col < p->cols(); ++col) out << (col ? " " : "") << p->value()(r, col);
      out << '\n';
    }
  }
  out << std::defaultfloat << "end\n";
  if (!out) throw DataError("save_checkpoint: write failed");
}

void save_checkpoint(const std::filesystem::path& path, const PVae& model, const std::vector<std::string>& question_ids) {
  std::ofstream out(path);
  if (!out) throw DataError("save_checkpoint: cannot open '" + path.string() + "'");
  save_checkpoint(out, model, question_ids);
}

Checkpoint load_checkpoint(std::istream& in) {
  if (expect_token(in, "magic") != kMagic) throw DataError("checkpoint: not a qinsight p-VAE checkpoint");
  const std::string version = expect_token(in, "version");
  if (version != std::to_string(kVersion)) throw DataError("checkpoint: unsupported version " + version);

  std::map<std::string, int> dims;
  for (const char* key : {"num_questions", "latent_dim", "embedding_dim", "point_dim", "point_hidden", "head_hidden",
                          "decoder_hidden"}) {
    if (expect_token(in, key) != key) throw DataError(std::string("checkpoint: expected '") + key + "'");
    dims[key] = std::stoi(expect_token(in, key));
  }
  ModelConfig config;
  config.num_questions = dims["num_questions"];
  config.latent_dim = dims["latent_dim"];
  config.embedding_dim = dims["embedding_dim"];
  config.point_dim = dims["point_dim"];
  config.point_hidden = dims["point_hidden"];
  config.head_hidden = dims["head_hidden"];
  config.decoder_hidden = dims["decoder_hidden"];

  Checkpoint ckpt{PVae(config), {}};
  if (expect_token(in, "question_ids") != "question_ids") throw DataError("checkpoint: expected 'question_ids'");
  const std::size_t n_ids = std::stoul(expect_token(in, "question id count"));
  for (std::size_t k = 0; k < n_ids; ++k) ckpt.question_ids.push_back(expect_token(in, "question id"));

  auto params = ckpt.model.parameters();
  if (expect_token(in, "tensors") != "tensors") throw DataError("checkpoint: expected 'tensors'");
  if (std::stoul(expect_token(in, "tensor count")) != params.size())
    throw DataError("checkpoint: tensor count does not match the configured architecture");
  for (core::ParamTensor* p : params) {
    if (expect_token(in, "tensor") != "tensor") throw DataError("checkpoint: expected 'tensor'");
    const std::string name = expect_token(in, "tensor name");
    const long rows = std::stol(expect_token(in, "rows"));
    const long cols = std::stol(expect_token(in, "cols"));
    if (name != p->name() || rows != p->rows() || cols != p->cols())
      throw DataError("checkpoint: tensor '" + name + "' does not match expected '" + p->name() + "'");
    core::Matrix value(rows, cols);
    for (long r = 0; r < rows; ++r)
      for (long c = 0; c < cols; ++c) value(r, c) = parse_double(expect_token(in, "value"));
    p->set_value(value);
  }
  if (expect_token(in, "end marker") != "end") throw DataError("checkpoint: missing end marker");
  return ckpt;
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("load_checkpoint: cannot open '" + path.string() + "'");
  return load_checkpoint(in);
}

}  // namespace qinsight::pvae
