/* Copyright 2026 The botcon Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef BOTCON_EVALUATION_HPP_
#define BOTCON_EVALUATION_HPP_

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "botcon/dataset.hpp"
#include "botcon/model.hpp"
#include "botcon/train.hpp"

namespace botcon {

struct ProbeConfig {
  int max_iterations = 10000;
  double learning_rate = 1.0;  // initial step; backtracking adapts it
  double tolerance = 1e-6;     // stop once the gradient norm falls below
  // Opt-in: after fitting the probe, jointly fine-tune probe, encoder and
  // representation on the weighted cross-entropy for this many Adam steps.
  int fine_tune_steps = 0;
  double fine_tune_learning_rate = 1e-3;

  void Validate() const;
};

// Logistic regression on encoder outputs with balanced class weights
// n / (2 * n_class).
struct ProbeParams {
  Vector weight;
  double bias = 0.0;
  std::array<double, 2> class_weights = {1.0, 1.0};
  int iterations = 0;
  double learning_rate = 1.0;
  double final_gradient_norm = 0.0;
};

std::array<double, 2> BalancedClassWeights(std::span<const int> labels);

ProbeParams FitProbe(const Matrix& embeddings, std::span<const int> labels, const ProbeConfig& cfg = {});

struct Prediction {
  int label = 0;  // 1 = bot; ties (score exactly 0.5) go to bot
  double score = 0.5;
};

Prediction Predict(const ProbeParams& probe, const Eigen::Ref<const Vector>& h);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int64_t support = 0;
};

struct MetricsReport {
  std::array<ClassMetrics, 2> per_class;  // index = label
  ClassMetrics macro;
  ClassMetrics weighted;
  double accuracy = 0.0;
  int64_t true_positive = 0;   // bot predicted bot
  int64_t false_positive = 0;  // human predicted bot
  int64_t true_negative = 0;
  int64_t false_negative = 0;
};

// Undefined precision or recall (empty denominator) counts as 0.
MetricsReport ComputeMetrics(std::span<const int> predictions, std::span<const int> labels);

nlohmann::ordered_json ToJson(const MetricsReport& report);
MetricsReport MetricsFromJson(const nlohmann::json& j);

// Frozen normalizer + model + probe. Predict takes a raw (unnormalized) row.
struct Pipeline {
  NormStats norm;
  ModelParams model;
  ProbeParams probe;

  Prediction Predict(const Eigen::Ref<const Vector>& raw_row) const;
  std::vector<Prediction> PredictBatch(const Matrix& raw_rows) const;
};

// Fits the probe on encoder outputs of the (normalized) training rows.
// Leaves `model` untouched unless cfg.fine_tune_steps > 0, in which case a
// fine-tuned copy is written to `tuned_model`.
ProbeParams FitProbeOnModel(const ModelParams& model, const Dataset& normalized_train, const ProbeConfig& cfg,
                            ModelParams* tuned_model = nullptr);

MetricsReport EvaluatePipeline(const Pipeline& pipeline, const Dataset& raw_ds);

struct ExperimentResult {
  Pipeline pipeline;
  TrainHistory history;
  MetricsReport test_report;
};

// Normalize on train_raw, contrastive training, probe fit on the frozen
// encoder, evaluation on test_raw.
ExperimentResult TrainAndEvaluate(const Dataset& train_raw, const Dataset& test_raw, const TrainConfig& train_cfg,
                                  const AugmentationConfig& aug_cfg, const ProbeConfig& probe_cfg);

// Stratified split of ds, then TrainAndEvaluate.
ExperimentResult RunWithinDataset(const Dataset& ds, double test_fraction, uint64_t split_seed,
                                  const TrainConfig& train_cfg, const AugmentationConfig& aug_cfg,
                                  const ProbeConfig& probe_cfg);

struct LoboResult {
  MetricsReport target;  // trained on the source train split, tested on the target test split
  MetricsReport source;  // same model on the source test split
  ExperimentResult experiment;
};

// Leave-one-dataset-out: both datasets are split with the same seed; the
// pipeline is built on the source train split only.
LoboResult Lobo(const Dataset& source, const Dataset& target, double test_fraction, uint64_t split_seed,
                const TrainConfig& train_cfg, const AugmentationConfig& aug_cfg, const ProbeConfig& probe_cfg);

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_tensor;
  size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  size_t checked = 0;
};

// Relative error |a - n| / max(|a|, |n|, kGradCheckFloor) per scalar.
inline constexpr double kGradCheckFloor = 1e-6;

using LossFunction = std::function<double(const ModelParams&)>;

// Central differences of `loss` for every scalar parameter, compared with `analytic`.
GradCheckResult GradCheckAgainst(const ModelParams& params, const ModelParams& analytic, const LossFunction& loss,
                                 double eps);

GradCheckResult GradCheck(LossKind kind, const ModelParams& params, const Matrix& views,
                          std::span<const size_t> partner, std::span<const int> labels, double temperature,
                          double eps = 1e-5);

// Small random instance: `pairs` pairs of raw rows of the given width split
// over the four categories, two classes (labels alternate by pair).
struct GradCheckInstance {
  FeatureSchema schema;
  ModelParams params;
  Matrix views;
  std::vector<size_t> partner;
  std::vector<int> labels;
};

GradCheckInstance MakeGradCheckInstance(uint64_t seed, size_t pairs = 8, size_t width = 20, size_t d = 4,
                                        size_t out_dim = 8);

}  // namespace botcon

#endif  // BOTCON_EVALUATION_HPP_
