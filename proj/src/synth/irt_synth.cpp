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

#include "qinsight/synth/irt_synth.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "qinsight/core/error.hpp"
#include "qinsight/core/random.hpp"
#include "qinsight/core/tensor.hpp"
#include "qinsight/data/csv_io.hpp"

namespace qinsight::synth {

namespace {

std::vector<std::string> padded_ids(char prefix, int n) {
  const int width = std::max(3, static_cast<int>(std::to_string(std::max(n, 1)).size()));
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    std::ostringstream s;
    s << prefix << std::setw(width) << std::setfill('0') << k;
    ids.push_back(s.str());
  }
  return ids;
}

}  // namespace

IrtGroundTruth generate_ground_truth(int num_students, int num_questions, std::uint64_t seed) {
  if (num_students < 2 || num_questions < 2) throw ConfigError("generate_ground_truth: need N, M >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  IrtGroundTruth truth;
  truth.seed = seed;
  truth.ability.resize(static_cast<std::size_t>(num_students));
  truth.difficulty.resize(static_cast<std::size_t>(num_questions));
  truth.discrimination.resize(static_cast<std::size_t>(num_questions));
  for (auto& v : truth.ability) v = normal(rng);
  for (auto& v : truth.difficulty) v = normal(rng);
  for (auto& v : truth.discrimination) v = std::exp(0.25 * normal(rng));
  return truth;
}

double answer_probability(double ability, double discrimination, double difficulty) {
  if (!(discrimination > 0.0)) throw ConfigError("answer_probability: discrimination must be positive");
  return core::sigmoid(discrimination * (ability - difficulty));
}

void ObservationModel::validate() const {
  if (!(density > 0.0 && density <= 1.0)) throw ConfigError("observation density must lie in (0, 1]");
  if (mode == ObservationMode::kAbilityBiased && !(bandwidth > 0.0))
    throw ConfigError("observation bandwidth must be positive");
}

std::vector<double> observation_probabilities(const IrtGroundTruth& truth, const ObservationModel& obs) {
  obs.validate();
  const std::size_t n = truth.ability.size();
  const std::size_t m = truth.difficulty.size();
  std::vector<double> p(n * m, obs.density);
  if (obs.mode == ObservationMode::kMcar) return p;

  const double two_tau2 = 2.0 * obs.bandwidth * obs.bandwidth;
  std::vector<double> kernel(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double d = truth.ability[i] - truth.difficulty[j];
      kernel[i * m + j] = std::exp(-d * d / two_tau2);
    }
  const double target = obs.density * static_cast<double>(n * m);
  const auto expected = [&](double c) {
    double total = 0.0;
    for (double k : kernel) total += std::min(1.0, c * k);
    return total;
  };
  const double kernel_sum = std::accumulate(kernel.begin(), kernel.end(), 0.0);
  double scale = target / kernel_sum;
  if (*std::max_element(kernel.begin(), kernel.end()) * scale > 1.0) {
    // Clamping at 1 loses mass; find the scale that restores it.
    double lo = scale;
    double hi = scale;
    while (expected(hi) < target && hi < 1e12) hi *= 2.0;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (expected(mid) < target ? lo : hi) = mid;
    }
    scale = hi;
  }
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::min(1.0, scale * kernel[k]);
  return p;
}

SampledAnswers sample_answers(const IrtGroundTruth& truth, const ObservationModel& obs, std::uint64_t seed) {
  const auto probs = observation_probabilities(truth, obs);
  const int n = truth.num_students();
  const int m = truth.num_questions();
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(n) * static_cast<std::size_t>(m), 0);
  std::vector<std::vector<data::Answer>> rows(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const std::size_t cell = static_cast<std::size_t>(i) * static_cast<std::size_t>(m) + static_cast<std::size_t>(j);
      const double u_obs = core::unit_from_hash(rng());
      const double u_ans = core::unit_from_hash(rng());
      if (u_obs >= probs[cell]) continue;
      mask[cell] = 1;
      const double p = answer_probability(truth.ability[static_cast<std::size_t>(i)],
                                          truth.discrimination[static_cast<std::size_t>(j)],
                                          truth.difficulty[static_cast<std::size_t>(j)]);
      rows[static_cast<std::size_t>(i)].push_back({j, u_ans < p ? 1 : 0});
    }
  }
  return SampledAnswers{data::AnswerMatrix(student_ids(n), question_ids(m), std::move(rows)), std::move(mask)};
}

std::vector<std::string> student_ids(int n) { return padded_ids('s', n); }
std::vector<std::string> question_ids(int m) { return padded_ids('q', m); }

data::QuestionMeta synthetic_topics(const IrtGroundTruth& truth, int num_topics, std::uint64_t seed) {
  if (num_topics < 1) throw ConfigError("synthetic_topics: need at least one topic");
  const int m = truth.num_questions();
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return truth.difficulty[static_cast<std::size_t>(x)] < truth.difficulty[static_cast<std::size_t>(y)];
  });
  const auto label = [](int t) {
    std::ostringstream s;
    s << "topic_" << std::setw(2) << std::setfill('0') << t;
    return s.str();
  };
  data::QuestionMeta meta;
  meta.topics.resize(static_cast<std::size_t>(m));
  std::mt19937_64 rng(seed);
  for (int rank = 0; rank < m; ++rank) {
    const int j = order[static_cast<std::size_t>(rank)];
    const int primary = static_cast<int>(static_cast<long long>(rank) * num_topics / m);
    auto& topics = meta.topics[static_cast<std::size_t>(j)];
    topics.push_back(label(primary));
    if (num_topics > 1 && core::unit_from_hash(rng()) < 1.0 / 3.0) {
      int extra = static_cast<int>(rng() % static_cast<std::uint64_t>(num_topics - 1));
      if (extra >= primary) ++extra;
      topics.push_back(label(extra));
    }
  }
  return meta;
}

void write_question_truth(std::ostream& out, const IrtGroundTruth& truth) {
  const auto ids = question_ids(truth.num_questions());
  out << "question_id\ta\tb\n" << std::setprecision(17);
  for (std::size_t j = 0; j < ids.size(); ++j)
    out << ids[j] << '\t' << truth.discrimination[j] << '\t' << truth.difficulty[j] << '\n';
}

void write_student_truth(std::ostream& out, const IrtGroundTruth& truth) {
  const auto ids = student_ids(truth.num_students());
  out << "student_id\ttheta\n" << std::setprecision(17);
  for (std::size_t i = 0; i < ids.size(); ++i) out << ids[i] << '\t' << truth.ability[i] << '\n';
}

std::map<std::string, QuestionTruth> read_question_truth(std::istream& in) {
  std::map<std::string, QuestionTruth> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto f = data::split_fields(line, '\t');
    if (f.size() < 3) throw DataError("question truth: expected 3 columns in '" + line + "'");
    out[f[0]] = QuestionTruth{std::stod(f[1]), std::stod(f[2])};
  }
  return out;
}

std::map<std::string, double> read_student_truth(std::istream& in) {
  std::map<std::string, double> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto f = data::split_fields(line, '\t');
    if (f.size() < 2) throw DataError("student truth: expected 2 columns in '" + line + "'");
    out[f[0]] = std::stod(f[1]);
  }
  return out;
}

}  // namespace qinsight::synth
