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

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "qinsight/analytics/difficulty.hpp"
#include "qinsight/analytics/quality.hpp"
#include "qinsight/analytics/reports.hpp"
#include "qinsight/analytics/spearman.hpp"
#include "qinsight/baselines/irt.hpp"
#include "qinsight/baselines/simple.hpp"
#include "qinsight/cli/cli.hpp"
#include "qinsight/core/error.hpp"
#include "qinsight/core/parallel.hpp"
#include "qinsight/core/random.hpp"
#include "qinsight/data/csv_io.hpp"
#include "qinsight/data/preprocess.hpp"
#include "qinsight/data/split.hpp"
#include "qinsight/pvae/checkpoint.hpp"
#include "qinsight/pvae/imputation.hpp"
#include "qinsight/pvae/train.hpp"
#include "qinsight/selection/strategies.hpp"
#include "qinsight/synth/irt_synth.hpp"

namespace qinsight::cli {

namespace fs = std::filesystem;
using data::Answer;
using data::AnswerMatrix;

namespace {

// Stream tags for derive_seed; every command draws from the single --seed.
constexpr std::uint64_t kSplitStream = 1;
constexpr std::uint64_t kTrainStream = 2;
constexpr std::uint64_t kEvalStream = 3;
constexpr std::uint64_t kAnalyticsStream = 4;
constexpr std::uint64_t kSelectStream = 5;
constexpr std::uint64_t kSynthStream = 6;

struct Globals {
  std::uint64_t seed = 0;
  int threads = core::default_threads();
};

struct DataOptions {
  std::string input;
  data::PreprocessOptions preprocess;
};

void add_data_options(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("--input", d.input, "Answer log CSV (student_id, question_id, is_correct[, timestamp])")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--min-question-answers", d.preprocess.min_answers_per_question,
                  "Drop questions with fewer answers")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--min-student-answers", d.preprocess.min_answers_per_student, "Drop students with fewer answers")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
}

AnswerMatrix load_matrix(const DataOptions& d, std::ostream& err) {
  const auto ingested = data::ingest_csv(fs::path(d.input));
  for (const auto& w : ingested.warnings) err << "warning: " << w << '\n';
  return data::preprocess(ingested.records, d.preprocess);
}

// Re-indexes `matrix` onto the model's question ids. Answers to questions the
// model does not know are dropped.
AnswerMatrix align_to_model(const AnswerMatrix& matrix, const std::vector<std::string>& ids) {
  std::map<std::string, int, std::less<>> index;
  for (std::size_t j = 0; j < ids.size(); ++j) index.emplace(ids[j], static_cast<int>(j));
  std::vector<int> remap(static_cast<std::size_t>(matrix.num_questions()), -1);
  bool any = false;
  for (int j = 0; j < matrix.num_questions(); ++j)
    if (auto it = index.find(matrix.question_id(j)); it != index.end()) {
      remap[static_cast<std::size_t>(j)] = it->second;
      any = true;
    }
  if (!any) throw DataError("no question in the input is known to the checkpoint");
  std::vector<std::vector<Answer>> rows(static_cast<std::size_t>(matrix.num_students()));
  for (int i = 0; i < matrix.num_students(); ++i) {
    for (const Answer& a : matrix.row(i))
      if (const int q = remap[static_cast<std::size_t>(a.question)]; q >= 0)
        rows[static_cast<std::size_t>(i)].push_back({q, a.value});
    std::sort(rows[static_cast<std::size_t>(i)].begin(), rows[static_cast<std::size_t>(i)].end(),
              [](const Answer& x, const Answer& y) { return x.question < y.question; });
  }
  return AnswerMatrix(matrix.student_ids(), ids, std::move(rows));
}

data::StudentSplit split_for(const AnswerMatrix& matrix, const Globals& g) {
  return data::split_students(matrix, data::SplitRatios{}, core::derive_seed(g.seed, {kSplitStream}));
}

// Writes to the named file, or to `fallback` when the name is empty.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
      return;
    }
    file_.open(path);
    if (!file_) throw std::runtime_error("cannot write " + path);
    stream_ = &file_;
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  body(out);
  if (!out) throw std::runtime_error("error writing " + path.string());
}

std::map<std::string, synth::QuestionTruth> load_question_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open truth file " + path);
  return synth::read_question_truth(in);
}

// Spearman of `values` (indexed by matrix column) against a truth column,
// over questions present in both.
std::optional<double> spearman_vs_truth(const AnswerMatrix& matrix, std::span<const double> values,
                                        const std::map<std::string, synth::QuestionTruth>& truth,
                                        double synth::QuestionTruth::*field) {
  std::vector<double> x, y;
  for (int j = 0; j < matrix.num_questions(); ++j)
    if (auto it = truth.find(matrix.question_id(j)); it != truth.end() && std::isfinite(values[static_cast<std::size_t>(j)])) {
      x.push_back(values[static_cast<std::size_t>(j)]);
      y.push_back(it->second.*field);
    }
  if (x.size() < 2) throw DataError("truth file shares fewer than two questions with the input");
  return analytics::spearman(x, y);
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
  int students = 2000;
  int questions = 300;
  double density = 0.2;
  std::string observation = "mcar";
  double bandwidth = 0.5;
  int topics = 10;
  std::string out_dir;
};

void add_synth(CLI::App* cmd, SynthArgs& a) {
  cmd->add_option("--students", a.students, "Number of students")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--questions", a.questions, "Number of questions")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--density", a.density, "Expected fraction of observed cells, in (0, 1]")->capture_default_str();
  cmd->add_option("--observation", a.observation, "Observation model")
      ->capture_default_str()
      ->check(CLI::IsMember({"mcar", "biased"}));
  cmd->add_option("--bandwidth", a.bandwidth, "Kernel width tau of the biased model")->capture_default_str();
  cmd->add_option("--topics", a.topics, "Number of synthetic topics")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--out", a.out_dir, "Output directory")->required();
}

int cmd_synth(const SynthArgs& a, const Globals& g, std::ostream& out) {
  synth::ObservationModel obs;
  obs.mode = a.observation == "biased" ? synth::ObservationMode::kAbilityBiased : synth::ObservationMode::kMcar;
  obs.density = a.density;
  obs.bandwidth = a.bandwidth;
  obs.validate();

  const auto truth = synth::generate_ground_truth(a.students, a.questions, core::derive_seed(g.seed, {kSynthStream, 0}));
  const auto sampled = synth::sample_answers(truth, obs, core::derive_seed(g.seed, {kSynthStream, 1}));
  const auto meta = synth::synthetic_topics(truth, a.topics, core::derive_seed(g.seed, {kSynthStream, 2}));

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  write_file(dir / "answers.csv", [&](std::ostream& o) { data::write_answers_csv(o, sampled.matrix); });
  write_file(dir / "question_truth.tsv", [&](std::ostream& o) { synth::write_question_truth(o, truth); });
  write_file(dir / "student_truth.tsv", [&](std::ostream& o) { synth::write_student_truth(o, truth); });
  write_file(dir / "topics.csv", [&](std::ostream& o) { data::write_topics_csv(o, sampled.matrix, meta); });
  out << "wrote " << sampled.matrix.num_observed() << " answers for " << a.students << " students x " << a.questions
      << " questions to " << dir.string() << '\n';
  return kSuccess;
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
  DataOptions data;
  std::string checkpoint;
  std::string trace;
  pvae::TrainConfig train;
  pvae::ModelConfig model;
  int hidden = 64;
  std::optional<int> decoder_hidden;
  std::string likelihood = "input";
};

void add_train(CLI::App* cmd, TrainArgs& a) {
  add_data_options(cmd, a.data);
  cmd->add_option("--checkpoint", a.checkpoint, "Where to write the trained model")->required();
  cmd->add_option("--trace", a.trace, "ELBO trace TSV (default: stdout)");
  cmd->add_option("--epochs", a.train.epochs)->capture_default_str();
  cmd->add_option("--lr", a.train.learning_rate, "Adam learning rate")->capture_default_str();
  cmd->add_option("--batch-size", a.train.batch_size)->capture_default_str();
  cmd->add_option("--dropout-min", a.train.dropout_min, "Lower bound of the per-row encoder drop rate")
      ->capture_default_str();
  cmd->add_option("--dropout-max", a.train.dropout_max, "Upper bound of the per-row encoder drop rate")
      ->capture_default_str();
  cmd->add_option("--likelihood", a.likelihood, "Answers scored by the reconstruction term: full (whole row) or input")
      ->capture_default_str()
      ->check(CLI::IsMember({"full", "input"}));
  cmd->add_option("--kl-warmup", a.train.kl_warmup_epochs, "Epochs over which the KL weight ramps up to 1")
      ->capture_default_str();
  cmd->add_option("--elbo-samples", a.train.elbo_samples, "Monte Carlo samples per row")->capture_default_str();
  cmd->add_option("--latent-dim", a.model.latent_dim)->capture_default_str();
  cmd->add_option("--embedding-dim", a.model.embedding_dim)->capture_default_str();
  cmd->add_option("--point-dim", a.model.point_dim, "Width of the per-answer feature")->capture_default_str();
  cmd->add_option("--hidden", a.hidden, "Hidden width of every network (0 = linear)")->capture_default_str();
  cmd->add_option("--decoder-hidden", a.decoder_hidden, "Hidden width of the decoder alone (default: --hidden)");
}

int cmd_train(TrainArgs a, const Globals& g, std::ostream& out, std::ostream& err) {
  a.train.seed = core::derive_seed(g.seed, {kTrainStream});
  a.model.point_hidden = a.model.head_hidden = a.model.decoder_hidden = a.hidden;
  if (a.decoder_hidden) a.model.decoder_hidden = *a.decoder_hidden;
  a.train.likelihood = a.likelihood == "input" ? pvae::LikelihoodTarget::kEncoderInput : pvae::LikelihoodTarget::kFullRow;
  a.train.validate();
  const auto matrix = load_matrix(a.data, err);
  a.model.num_questions = matrix.num_questions();
  a.model.validate();
  const auto split = split_for(matrix, g);

  Output trace(a.trace, out);
  *trace << "epoch\ttrain_elbo\tvalidation_elbo\n";
  const auto result = pvae::train(matrix, split, a.model, a.train, [&](const pvae::EpochStats& s) {
    *trace << s.epoch << '\t' << analytics::format_value(s.train_elbo) << '\t'
           << analytics::format_value(s.validation_elbo) << '\n';
  });
  pvae::save_checkpoint(fs::path(a.checkpoint), result.model, matrix.question_ids());
  return kSuccess;
}

// Shared by the commands that consume a trained model.
struct ModelInputs {
  DataOptions data;
  std::string checkpoint;
};

void add_model_inputs(CLI::App* cmd, ModelInputs& m) {
  add_data_options(cmd, m.data);
  cmd->add_option("--checkpoint", m.checkpoint, "Trained model")->required()->check(CLI::ExistingFile);
}

struct Loaded {
  pvae::Checkpoint checkpoint;
  AnswerMatrix matrix;
};

Loaded load_inputs(const ModelInputs& m, std::ostream& err) {
  auto checkpoint = pvae::load_checkpoint(fs::path(m.checkpoint));
  auto matrix = align_to_model(load_matrix(m.data, err), checkpoint.question_ids);
  return {std::move(checkpoint), std::move(matrix)};
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
  ModelInputs inputs;
  std::string methods = "pvae,irt,random,majority";
  double conditioning_fraction = 0.5;
  int samples = 50;
  int irt_epochs = 300;
  std::string output;
};

void add_eval(CLI::App* cmd, EvalArgs& a) {
  add_model_inputs(cmd, a.inputs);
  cmd->add_option("--methods", a.methods, "Comma-separated subset of pvae,irt,random,majority")->capture_default_str();
  cmd->add_option("--conditioning-fraction", a.conditioning_fraction,
                  "Share of each test row revealed to the imputer")
      ->capture_default_str();
  cmd->add_option("--samples", a.samples, "Posterior draws per prediction")->capture_default_str();
  cmd->add_option("--irt-epochs", a.irt_epochs)->capture_default_str();
  cmd->add_option("--output", a.output, "Result TSV (default: stdout)");
}

int cmd_eval(const EvalArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const auto methods = split_list(a.methods);
  if (methods.empty()) throw ConfigError("--methods: empty list");
  for (const auto& m : methods)
    if (m != "pvae" && m != "irt" && m != "random" && m != "majority")
      throw ConfigError("--methods: unknown method '" + m + "'");
  if (!(a.conditioning_fraction > 0.0 && a.conditioning_fraction < 1.0))
    throw ConfigError("--conditioning-fraction must be in (0, 1)");
  if (a.samples < 1) throw ConfigError("--samples must be >= 1");

  const auto [checkpoint, matrix] = load_inputs(a.inputs, err);
  const auto split = split_for(matrix, g);
  const std::uint64_t seed = core::derive_seed(g.seed, {kEvalStream});

  Output result(a.output, out);
  *result << "method\taccuracy\tmae\tnum_targets\n";
  for (const auto& m : methods) {
    std::unique_ptr<pvae::Imputer> imputer;
    baselines::IrtParams irt;
    if (m == "pvae") {
      imputer = std::make_unique<pvae::PVaeImputer>(checkpoint.model, a.samples);
    } else if (m == "irt") {
      baselines::IrtConfig config;
      config.epochs = a.irt_epochs;
      config.seed = core::derive_seed(seed, {1});
      irt = baselines::fit_irt(matrix, split, config);
      imputer = std::make_unique<baselines::IrtImputer>(irt);
    } else if (m == "random") {
      imputer = std::make_unique<baselines::RandomImputer>(matrix.num_questions());
    } else {
      imputer = std::make_unique<baselines::MajorityImputer>(baselines::majority_values(matrix, split.train));
    }
    const auto score =
        pvae::evaluate_imputation(*imputer, matrix, split.test, a.conditioning_fraction, seed, 0.5, g.threads);
    *result << m << '\t' << analytics::format_value(score.accuracy) << '\t' << analytics::format_value(score.mae)
            << '\t' << score.num_targets << '\n';
  }
  return kSuccess;
}

// ---- difficulty -----------------------------------------------------------

struct DifficultyArgs {
  ModelInputs inputs;
  int samples = 50;
  std::string output;
  std::string topics;
  std::string topic_output;
  std::string truth;
};

void add_difficulty(CLI::App* cmd, DifficultyArgs& a) {
  add_model_inputs(cmd, a.inputs);
  cmd->add_option("--samples", a.samples, "Posterior draws per student")->capture_default_str();
  cmd->add_option("--output", a.output, "Difficulty TSV (default: stdout)");
  cmd->add_option("--topics", a.topics, "question_id,topics CSV for the topic ranking")->check(CLI::ExistingFile);
  cmd->add_option("--topic-output", a.topic_output, "Topic ranking TSV (default: stdout)");
  cmd->add_option("--truth", a.truth, "question_id/a/b TSV; adds Spearman-vs-truth rows")->check(CLI::ExistingFile);
}

int cmd_difficulty(const DifficultyArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  if (a.samples < 1) throw ConfigError("--samples must be >= 1");
  const auto [checkpoint, matrix] = load_inputs(a.inputs, err);
  const std::uint64_t seed = core::derive_seed(g.seed, {kAnalyticsStream});
  const auto report = analytics::difficulty(checkpoint.model, matrix, {a.samples, seed, g.threads});
  {
    Output o(a.output, out);
    analytics::write_difficulty_tsv(*o, matrix, report);
  }
  if (!a.topics.empty()) {
    const auto meta = data::align_meta(matrix, data::read_topics_csv(fs::path(a.topics)));
    const auto ranking = analytics::topic_ranking(report, meta, matrix);
    for (const auto& w : ranking.warnings) err << "warning: " << w << '\n';
    Output o(a.topic_output, out);
    analytics::write_topic_ranking_tsv(*o, ranking);
  }
  if (!a.truth.empty()) {
    const auto truth = load_question_truth(a.truth);
    out << "scheme\tspearman_vs_truth\n";
    const auto row = [&](const std::string& name, const analytics::DifficultyReport& r) {
      out << name << '\t'
          << analytics::format_value(spearman_vs_truth(matrix, r.difficulty, truth, &synth::QuestionTruth::difficulty))
          << '\n';
    };
    row("pvae", report);
    row("observed_only", analytics::difficulty_baseline(matrix, analytics::DifficultyScheme::kObservedOnly));
    row("majority_impute", analytics::difficulty_baseline(matrix, analytics::DifficultyScheme::kMajorityImpute));
    row("random",
        analytics::difficulty_baseline(matrix, analytics::DifficultyScheme::kRandom, core::derive_seed(seed, {1})));
  }
  return kSuccess;
}

// ---- quality --------------------------------------------------------------

struct QualityArgs {
  ModelInputs inputs;
  int max_samples = 500;
  std::string output;
  std::string truth;
};

void add_quality(CLI::App* cmd, QualityArgs& a) {
  add_model_inputs(cmd, a.inputs);
  cmd->add_option("--max-samples", a.max_samples, "Students sampled per question")->capture_default_str();
  cmd->add_option("--output", a.output, "Quality TSV (default: stdout)");
  cmd->add_option("--truth", a.truth, "question_id/a/b TSV; adds Spearman-vs-truth rows")->check(CLI::ExistingFile);
}

int cmd_quality(const QualityArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  if (a.max_samples < 1) throw ConfigError("--max-samples must be >= 1");
  const auto [checkpoint, matrix] = load_inputs(a.inputs, err);
  const std::uint64_t seed = core::derive_seed(g.seed, {kAnalyticsStream});
  const auto report = analytics::quality_report(checkpoint.model, matrix, {a.max_samples, seed, g.threads});
  {
    Output o(a.output, out);
    analytics::write_quality_tsv(*o, matrix, report);
  }
  if (!a.truth.empty()) {
    const auto truth = load_question_truth(a.truth);
    const auto n = static_cast<std::size_t>(matrix.num_questions());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> reward(n, nan), entropy(n, nan), random(n, nan);
    auto rng = core::make_rng(seed, {2});
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t k = 0; k < report.question.size(); ++k) {
      const auto j = static_cast<std::size_t>(report.question[k]);
      reward[j] = report.reward[k];
      entropy[j] = report.entropy[k];
      random[j] = u(rng);
    }
    out << "score\tspearman_vs_discrimination\n";
    out << "R\t" << analytics::format_value(spearman_vs_truth(matrix, reward, truth, &synth::QuestionTruth::discrimination)) << '\n';
    out << "entropy\t" << analytics::format_value(spearman_vs_truth(matrix, entropy, truth, &synth::QuestionTruth::discrimination)) << '\n';
    out << "random\t" << analytics::format_value(spearman_vs_truth(matrix, random, truth, &synth::QuestionTruth::discrimination)) << '\n';
  }
  return kSuccess;
}

// ---- select ---------------------------------------------------------------

struct SelectArgs {
  ModelInputs inputs;
  std::string strategies = "ours,rand,sing";
  selection::EvaluationConfig eval;
  std::string oracle = "replay";
  std::string question_truth;
  std::string student_truth;
  std::string output;
  std::string session_log;
  std::string student;
};

void add_select(CLI::App* cmd, SelectArgs& a) {
  add_model_inputs(cmd, a.inputs);
  cmd->add_option("--strategies", a.strategies, "Comma-separated subset of ours,rand,sing")->capture_default_str();
  cmd->add_option("--runs", a.eval.runs)->capture_default_str();
  cmd->add_option("--students-per-run", a.eval.students_per_run)->capture_default_str();
  cmd->add_option("--target-fraction", a.eval.target_fraction, "Share of each row held out as targets")
      ->capture_default_str();
  cmd->add_option("--steps", a.eval.session.steps)->capture_default_str();
  cmd->add_option("--reward-samples", a.eval.session.reward_samples, "Posterior draws for the predictive probability")
      ->capture_default_str();
  cmd->add_option("--impute-samples", a.eval.session.impute_samples, "Posterior draws for target predictions")
      ->capture_default_str();
  cmd->add_option("--oracle", a.oracle, "replay: logged answers only; synthetic: fill gaps from the 2PL truth")
      ->capture_default_str()
      ->check(CLI::IsMember({"replay", "synthetic"}));
  cmd->add_option("--question-truth", a.question_truth, "question_id/a/b TSV (synthetic oracle)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--student-truth", a.student_truth, "student_id/theta TSV (synthetic oracle)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--output", a.output, "Strategy comparison TSV (default: stdout)");
  cmd->add_option("--session-log", a.session_log, "Write one personalized session log for --student");
  cmd->add_option("--student", a.student, "Student id for --session-log");
}

// 2PL parameters in matrix order, for the synthetic oracle.
synth::IrtGroundTruth truth_for(const AnswerMatrix& matrix, const std::string& question_path,
                                const std::string& student_path) {
  if (question_path.empty() || student_path.empty())
    throw ConfigError("--oracle synthetic needs --question-truth and --student-truth");
  const auto questions = load_question_truth(question_path);
  std::ifstream in(student_path);
  if (!in) throw ConfigError("cannot open " + student_path);
  const auto students = synth::read_student_truth(in);
  synth::IrtGroundTruth truth;
  for (const auto& id : matrix.question_ids()) {
    const auto it = questions.find(id);
    if (it == questions.end()) throw DataError("question " + id + " missing from " + question_path);
    truth.discrimination.push_back(it->second.discrimination);
    truth.difficulty.push_back(it->second.difficulty);
  }
  for (const auto& id : matrix.student_ids()) {
    const auto it = students.find(id);
    if (it == students.end()) throw DataError("student " + id + " missing from " + student_path);
    truth.ability.push_back(it->second);
  }
  return truth;
}

int cmd_select(SelectArgs a, const Globals& g, std::ostream& out, std::ostream& err) {
  a.eval.strategies.clear();
  for (const auto& s : split_list(a.strategies)) a.eval.strategies.push_back(selection::parse_strategy(s));
  a.eval.threads = g.threads;
  a.eval.session.seed = core::derive_seed(g.seed, {kSelectStream});
  a.eval.validate();
  if (a.session_log.empty() != a.student.empty())
    throw ConfigError("--session-log and --student must be given together");

  const auto [checkpoint, matrix] = load_inputs(a.inputs, err);
  const auto split = split_for(matrix, g);

  std::optional<synth::IrtGroundTruth> truth;
  selection::OracleFactory oracles;
  if (a.oracle == "synthetic") {
    truth = truth_for(matrix, a.question_truth, a.student_truth);
    const std::uint64_t oracle_seed = core::derive_seed(g.seed, {kSelectStream, 1});
    oracles = [&truth, oracle_seed](int student, std::span<const Answer> row) -> std::unique_ptr<selection::AnswerOracle> {
      return std::make_unique<selection::SyntheticOracle>(*truth, student, row, oracle_seed);
    };
  }

  const auto curves = selection::evaluate_strategies(checkpoint.model, matrix, split.test, a.eval, oracles);
  for (const auto& c : curves)
    if (c.early_stops > 0)
      err << "warning: " << selection::strategy_name(c.strategy) << ": " << c.early_stops
          << " sessions ran out of answerable questions\n";
  {
    Output o(a.output, out);
    selection::write_strategy_comparison(*o, curves);
  }

  if (!a.session_log.empty()) {
    const auto student = matrix.student_index(a.student);
    if (!student) throw ConfigError("--student: unknown student '" + a.student + "'");
    const auto row = matrix.row(*student);
    if (row.empty()) throw DataError("student " + a.student + " has no answers");
    const auto held = data::hold_out_targets(row, a.eval.target_fraction,
                                             core::derive_seed(a.eval.session.seed, {0x106, static_cast<std::uint64_t>(*student)}));
    std::unique_ptr<selection::AnswerOracle> oracle =
        oracles ? oracles(*student, row) : std::make_unique<selection::ReplayOracle>(row);
    const selection::RewardEngine engine(checkpoint.model);
    const auto session = selection::run_session(engine, *oracle, *student, held.targets, a.eval.session);
    write_file(a.session_log, [&](std::ostream& o) { selection::write_session_log(o, session, matrix.question_ids()); });
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  CLI::App app{"qinsight: partial-VAE imputation, question analytics and adaptive question selection"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeFirst);
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::string config_placeholder;
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker cap")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--config", config_placeholder, "File of key = value settings; flags take precedence");

  SynthArgs synth_args;
  TrainArgs train_args;
  EvalArgs eval_args;
  DifficultyArgs difficulty_args;
  QualityArgs quality_args;
  SelectArgs select_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic 2PL dataset with ground truth");
  auto* train_cmd = app.add_subcommand("train", "Train a model and write a checkpoint");
  auto* eval_cmd = app.add_subcommand("eval", "Held-out imputation accuracy and MAE");
  auto* difficulty_cmd = app.add_subcommand("difficulty", "Per-question difficulty from imputed answers");
  auto* quality_cmd = app.add_subcommand("quality", "Per-question information quality");
  auto* select_cmd = app.add_subcommand("select", "Compare question-selection strategies");
  add_synth(synth_cmd, synth_args);
  add_train(train_cmd, train_args);
  add_eval(eval_cmd, eval_args);
  add_difficulty(difficulty_cmd, difficulty_args);
  add_quality(quality_cmd, quality_args);
  add_select(select_cmd, select_args);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kSuccess;
    }
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*synth_cmd) return cmd_synth(synth_args, g, out);
    if (*train_cmd) return cmd_train(train_args, g, out, err);
    if (*eval_cmd) return cmd_eval(eval_args, g, out, err);
    if (*difficulty_cmd) return cmd_difficulty(difficulty_args, g, out, err);
    if (*quality_cmd) return cmd_quality(quality_args, g, out, err);
    if (*select_cmd) return cmd_select(select_args, g, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsageError;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace qinsight::cli
