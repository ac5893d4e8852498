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
#include "botcon/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "botcon/optimizer.hpp"

namespace botcon {
namespace {

double Sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

// log(1 + exp(s)) without overflow.
double Softplus(double s) { return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

struct WeightedLogistic {
  const Matrix& x;
  std::span<const int> y;
  std::array<double, 2> class_weights;

  double Loss(const Vector& w, double b) const {
    const Vector s = x * w;
    double total = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      const double si = s[i] + b;
      const int yi = y[static_cast<size_t>(i)];
      total += class_weights[static_cast<size_t>(yi)] * (Softplus(si) - yi * si);
    }
    return total / static_cast<double>(s.size());
  }

  // Returns the loss; writes the gradient.
  double Gradient(const Vector& w, double b, Vector& gw, double& gb) const {
    const Vector s = x * w;
    Vector ds(s.size());
    double total = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      const double si = s[i] + b;
      const int yi = y[static_cast<size_t>(i)];
      const double cw = class_weights[static_cast<size_t>(yi)];
      total += cw * (Softplus(si) - yi * si);
      ds[i] = cw * (Sigmoid(si) - yi);
    }
    const double inv_n = 1.0 / static_cast<double>(s.size());
    gw = (x.transpose() * ds) * inv_n;
    gb = ds.sum() * inv_n;
    return total * inv_n;
  }
};

}  // namespace

void ProbeConfig::Validate() const {
  if (max_iterations < 1) throw ConfigError("probe.max_iterations must be positive", "probe.max_iterations");
  if (!(learning_rate > 0.0)) throw ConfigError("probe.learning_rate must be positive", "probe.learning_rate");
  if (!(tolerance > 0.0)) throw ConfigError("probe.tolerance must be positive", "probe.tolerance");
  if (fine_tune_steps < 0) throw ConfigError("probe.fine_tune_steps must be nonnegative", "probe.fine_tune_steps");
  if (!(fine_tune_learning_rate > 0.0)) {
    throw ConfigError("probe.fine_tune_learning_rate must be positive", "probe.fine_tune_learning_rate");
  }
}

std::array<double, 2> BalancedClassWeights(std::span<const int> labels) {
  std::array<int64_t, 2> counts = {0, 0};
  for (int y : labels) {
    if (y != 0 && y != 1) throw DataError("labels must be 0 or 1");
    ++counts[static_cast<size_t>(y)];
  }
  if (counts[0] == 0 || counts[1] == 0) throw ConfigError("probe needs both classes in the training labels", "labels");
  const auto n = static_cast<double>(labels.size());
  return {n / (2.0 * static_cast<double>(counts[0])), n / (2.0 * static_cast<double>(counts[1]))};
}

ProbeParams FitProbe(const Matrix& embeddings, std::span<const int> labels, const ProbeConfig& cfg) {
  cfg.Validate();
  if (static_cast<size_t>(embeddings.rows()) != labels.size()) {
    throw DimensionError("embedding rows do not match label count");
  }
  ProbeParams probe;
  probe.class_weights = BalancedClassWeights(labels);
  probe.learning_rate = cfg.learning_rate;

  // Gradient descent runs on standardized features; the solution is mapped
  // back to raw embedding coordinates at the end.
  const Vector mean = embeddings.colwise().mean().transpose();
  Vector scale = ((embeddings.rowwise() - mean.transpose()).array().square().colwise().mean()).sqrt().transpose();
  for (Eigen::Index j = 0; j < scale.size(); ++j)
    if (scale[j] < kZeroVarianceThreshold) scale[j] = 1.0;
  const Matrix x = (embeddings.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();

  const WeightedLogistic objective{x, labels, probe.class_weights};
  Vector w = Vector::Zero(x.cols());
  double b = 0.0;
  Vector gw;
  double gb = 0.0;
  double step = cfg.learning_rate;
  double loss = objective.Gradient(w, b, gw, gb);
  double gnorm = std::sqrt(gw.squaredNorm() + gb * gb);
  int it = 0;
  for (; it < cfg.max_iterations && gnorm >= cfg.tolerance; ++it) {
    // Armijo backtracking.
    double t = step;
    Vector w_next;
    double b_next = 0.0;
    double next_loss = 0.0;
    for (int tries = 0; tries < 60; ++tries) {
      w_next = w - t * gw;
      b_next = b - t * gb;
      next_loss = objective.Loss(w_next, b_next);
      if (next_loss <= loss - 0.5 * t * gnorm * gnorm) break;
      t *= 0.5;
    }
    w = std::move(w_next);
    b = b_next;
    step = std::min(2.0 * t, 1e6);
    loss = objective.Gradient(w, b, gw, gb);
    gnorm = std::sqrt(gw.squaredNorm() + gb * gb);
  }
  probe.iterations = it;
  probe.final_gradient_norm = gnorm;
  probe.weight = w.cwiseQuotient(scale);
  probe.bias = b - probe.weight.dot(mean);
  return probe;
}

Prediction Predict(const ProbeParams& probe, const Eigen::Ref<const Vector>& h) {
  if (h.size() != probe.weight.size()) throw DimensionError("probe input width mismatch");
  Prediction p;
  p.score = Sigmoid(probe.weight.dot(h) + probe.bias);
  p.label = p.score >= 0.5 ? 1 : 0;
  return p;
}

MetricsReport ComputeMetrics(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) throw DimensionError("prediction and label counts differ");
  if (predictions.empty()) throw ConfigError("metrics need at least one prediction", "predictions");
  MetricsReport r;
  for (size_t i = 0; i < labels.size(); ++i) {
    const int p = predictions[i];
    const int y = labels[i];
    if ((p != 0 && p != 1) || (y != 0 && y != 1)) throw DataError("predictions and labels must be 0 or 1");
    if (y == 1 && p == 1) ++r.true_positive;
    if (y == 0 && p == 1) ++r.false_positive;
    if (y == 0 && p == 0) ++r.true_negative;
    if (y == 1 && p == 0) ++r.false_negative;
  }
  auto ratio = [](int64_t a, int64_t b) { return b > 0 ? static_cast<double>(a) / static_cast<double>(b) : 0.0; };
  auto fill = [&](ClassMetrics& m, int64_t tp, int64_t fp, int64_t fn) {
    m.precision = ratio(tp, tp + fp);
    m.recall = ratio(tp, tp + fn);
    m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    m.support = tp + fn;
  };
  fill(r.per_class[1], r.true_positive, r.false_positive, r.false_negative);
  fill(r.per_class[0], r.true_negative, r.false_negative, r.false_positive);

  const auto n = static_cast<double>(labels.size());
  r.macro.precision = 0.5 * (r.per_class[0].precision + r.per_class[1].precision);
  r.macro.recall = 0.5 * (r.per_class[0].recall + r.per_class[1].recall);
  r.macro.f1 = 0.5 * (r.per_class[0].f1 + r.per_class[1].f1);
  r.macro.support = static_cast<int64_t>(labels.size());
  const double w0 = static_cast<double>(r.per_class[0].support) / n;
  const double w1 = static_cast<double>(r.per_class[1].support) / n;
  r.weighted.precision = w0 * r.per_class[0].precision + w1 * r.per_class[1].precision;
  r.weighted.recall = w0 * r.per_class[0].recall + w1 * r.per_class[1].recall;
  r.weighted.f1 = w0 * r.per_class[0].f1 + w1 * r.per_class[1].f1;
  r.weighted.support = r.macro.support;
  r.accuracy = static_cast<double>(r.true_positive + r.true_negative) / n;
  return r;
}

namespace {

nlohmann::ordered_json ClassJson(const ClassMetrics& m) {
  nlohmann::ordered_json j;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["support"] = m.support;
  return j;
}

ClassMetrics ClassFromJson(const nlohmann::json& j) {
  ClassMetrics m;
  m.precision = j.at("precision").get<double>();
  m.recall = j.at("recall").get<double>();
  m.f1 = j.at("f1").get<double>();
  m.support = j.at("support").get<int64_t>();
  return m;
}

}  // namespace

nlohmann::ordered_json ToJson(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["macro_f1"] = r.macro.f1;
  j["weighted_f1"] = r.weighted.f1;
  j["accuracy"] = r.accuracy;
  j["confusion"] = {{"tp", r.true_positive}, {"fp", r.false_positive}, {"tn", r.true_negative}, {"fn", r.false_negative}};
  j["per_class"] = {{"human", ClassJson(r.per_class[0])}, {"bot", ClassJson(r.per_class[1])}};
  j["macro"] = ClassJson(r.macro);
  j["weighted"] = ClassJson(r.weighted);
  return j;
}

MetricsReport MetricsFromJson(const nlohmann::json& j) {
  MetricsReport r;
  const auto& c = j.at("confusion");
  r.true_positive = c.at("tp").get<int64_t>();
  r.false_positive = c.at("fp").get<int64_t>();
  r.true_negative = c.at("tn").get<int64_t>();
  r.false_negative = c.at("fn").get<int64_t>();
  r.per_class[0] = ClassFromJson(j.at("per_class").at("human"));
  r.per_class[1] = ClassFromJson(j.at("per_class").at("bot"));
  r.macro = ClassFromJson(j.at("macro"));
  r.weighted = ClassFromJson(j.at("weighted"));
  r.accuracy = j.at("accuracy").get<double>();
  return r;
}

Prediction Pipeline::Predict(const Eigen::Ref<const Vector>& raw_row) const {
  // The attack harness calls this millions of times; reuse per-thread buffers.
  thread_local Vector row;
  thread_local Vector h;
  thread_local EncodeScratch scratch;
  row = raw_row;
  NormalizeRow(norm, row);
  EncodeHidden(model, row, scratch, h);
  return botcon::Predict(probe, h);
}

std::vector<Prediction> Pipeline::PredictBatch(const Matrix& raw_rows) const {
  Matrix rows = raw_rows;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    Vector r = rows.row(i).transpose();
    NormalizeRow(norm, r);
    rows.row(i) = r.transpose();
  }
  const Matrix h = EncodeBatch(model, rows);
  std::vector<Prediction> out;
  out.reserve(static_cast<size_t>(h.rows()));
  for (Eigen::Index i = 0; i < h.rows(); ++i) out.push_back(botcon::Predict(probe, h.row(i).transpose()));
  return out;
}

ProbeParams FitProbeOnModel(const ModelParams& model, const Dataset& normalized_train, const ProbeConfig& cfg,
                            ModelParams* tuned_model) {
  const auto& labels = normalized_train.RequireLabels();
  ProbeParams probe = FitProbe(EncodeBatch(model, normalized_train.rows), labels, cfg);
  if (cfg.fine_tune_steps == 0) {
    if (tuned_model) *tuned_model = model;
    return probe;
  }

  // Joint fine-tuning on the class-weighted cross-entropy (full batch, Adam).
  ModelParams params = model;
  AdamState adam = AdamState::For(params);
  const auto n = static_cast<double>(labels.size());
  Vector pm = Vector::Zero(probe.weight.size() + 1), pv = Vector::Zero(probe.weight.size() + 1);
  constexpr double kB1 = 0.9, kB2 = 0.999, kEps = 1e-8;
  for (int step = 1; step <= cfg.fine_tune_steps; ++step) {
    const ForwardCache cache = Forward(params, normalized_train.rows);
    Vector ds(cache.h.rows());
    for (Eigen::Index i = 0; i < ds.size(); ++i) {
      const int y = labels[static_cast<size_t>(i)];
      const double s = probe.weight.dot(cache.h.row(i).transpose()) + probe.bias;
      ds[i] = probe.class_weights[static_cast<size_t>(y)] * (Sigmoid(s) - y) / n;
    }
    const Matrix grad_h = ds * probe.weight.transpose();
    const ModelParams grads = BackwardFromEncoderOutput(params, cache, grad_h);
    Vector gp(probe.weight.size() + 1);
    gp.head(probe.weight.size()) = cache.h.transpose() * ds;
    gp[probe.weight.size()] = ds.sum();

    AdamStep(adam, params, grads, cfg.fine_tune_learning_rate);
    pm = kB1 * pm + (1.0 - kB1) * gp;
    pv = kB2 * pv + (1.0 - kB2) * gp.cwiseAbs2();
    const double c1 = 1.0 - std::pow(kB1, step), c2 = 1.0 - std::pow(kB2, step);
    const Vector update = cfg.fine_tune_learning_rate * (pm / c1).cwiseQuotient(((pv / c2).cwiseSqrt().array() + kEps).matrix());
    probe.weight -= update.head(probe.weight.size());
    probe.bias -= update[probe.weight.size()];
  }
  if (tuned_model) *tuned_model = std::move(params);
  return probe;
}

MetricsReport EvaluatePipeline(const Pipeline& pipeline, const Dataset& raw_ds) {
  const auto& labels = raw_ds.RequireLabels();
  const auto preds = pipeline.PredictBatch(raw_ds.rows);
  std::vector<int> hard(preds.size());
  for (size_t i = 0; i < preds.size(); ++i) hard[i] = preds[i].label;
  return ComputeMetrics(hard, labels);
}

ExperimentResult TrainAndEvaluate(const Dataset& train_raw, const Dataset& test_raw, const TrainConfig& train_cfg,
                                  const AugmentationConfig& aug_cfg, const ProbeConfig& probe_cfg) {
  if (train_raw.schema != test_raw.schema) throw ConfigError("train and test schemas differ", "schema");
  ExperimentResult r;
  r.pipeline.norm = FitNormalizer(train_raw);
  const Dataset train = ApplyNormalizer(r.pipeline.norm, train_raw);
  TrainResult trained = Train(train, train_cfg, aug_cfg);
  r.history = std::move(trained.history);
  r.pipeline.probe = FitProbeOnModel(trained.params, train, probe_cfg, &r.pipeline.model);
  r.test_report = EvaluatePipeline(r.pipeline, test_raw);
  return r;
}

ExperimentResult RunWithinDataset(const Dataset& ds, double test_fraction, uint64_t split_seed,
                                  const TrainConfig& train_cfg, const AugmentationConfig& aug_cfg,
                                  const ProbeConfig& probe_cfg) {
  auto [train, test] = SplitDataset(ds, test_fraction, split_seed);
  return TrainAndEvaluate(train, test, train_cfg, aug_cfg, probe_cfg);
}

LoboResult Lobo(const Dataset& source, const Dataset& target, double test_fraction, uint64_t split_seed,
                const TrainConfig& train_cfg, const AugmentationConfig& aug_cfg, const ProbeConfig& probe_cfg) {
  if (source.schema != target.schema) throw ConfigError("LOBO datasets do not share a schema", "schema");
  auto [source_train, source_test] = SplitDataset(source, test_fraction, split_seed);
  auto target_test = SplitDataset(target, test_fraction, split_seed).second;
  LoboResult r;
  r.experiment = TrainAndEvaluate(source_train, source_test, train_cfg, aug_cfg, probe_cfg);
  r.source = r.experiment.test_report;
  r.target = EvaluatePipeline(r.experiment.pipeline, target_test);
  return r;
}

GradCheckResult GradCheckAgainst(const ModelParams& params, const ModelParams& analytic, const LossFunction& loss,
                                 double eps) {
  GradCheckResult result;
  std::vector<std::span<const double>> grads;
  std::vector<std::string> names;
  analytic.ForEachTensor([&](std::string_view name, std::span<const double> s) {
    grads.push_back(s);
    names.emplace_back(name);
  });
  ModelParams probe = params;
  std::vector<std::span<double>> slots;
  probe.ForEachTensor([&](std::string_view, std::span<double> s) { slots.push_back(s); });
  if (slots.size() != grads.size()) throw DimensionError("analytic gradient layout does not match parameters");

  for (size_t t = 0; t < slots.size(); ++t) {
    if (slots[t].size() != grads[t].size()) throw DimensionError("gradient shape mismatch in " + names[t]);
    for (size_t i = 0; i < slots[t].size(); ++i) {
      const double saved = slots[t][i];
      slots[t][i] = saved + eps;
      const double up = loss(probe);
      slots[t][i] = saved - eps;
      const double down = loss(probe);
      slots[t][i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double a = grads[t][i];
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), kGradCheckFloor});
      ++result.checked;
      if (rel > result.max_relative_error || result.worst_tensor.empty()) {
        result.max_relative_error = std::max(rel, result.max_relative_error);
        if (rel >= result.max_relative_error) {
          result.worst_tensor = names[t];
          result.worst_index = i;
          result.analytic = a;
          result.numeric = numeric;
        }
      }
    }
  }
  return result;
}

GradCheckResult GradCheck(LossKind kind, const ModelParams& params, const Matrix& views,
                          std::span<const size_t> partner, std::span<const int> labels, double temperature,
                          double eps) {
  const BatchLoss analytic = LossAndGradients(params, views, partner, labels, kind, temperature);
  return GradCheckAgainst(
      params, analytic.grads,
      [&](const ModelParams& p) { return BatchLossValue(p, views, partner, labels, kind, temperature); }, eps);
}

GradCheckInstance MakeGradCheckInstance(uint64_t seed, size_t pairs, size_t width, size_t d, size_t out_dim) {
  if (width < 4) throw ConfigError("grad-check width must be at least 4", "gradcheck.width");
  if (pairs < 2) throw ConfigError("grad-check needs at least 2 pairs", "gradcheck.pairs");
  GradCheckInstance inst;
  // Split the width over the categories roughly 30/30/25/15.
  const size_t um = std::max<size_t>(1, width * 3 / 10);
  const size_t emb = std::max<size_t>(1, width * 3 / 10);
  const size_t tm = std::max<size_t>(1, width / 4);
  if (um + emb + tm >= width) throw ConfigError("grad-check width too small", "gradcheck.width");
  const size_t tt = width - um - emb - tm;
  for (size_t i = 0; i < um; ++i) inst.schema.user_meta_names.push_back("u" + std::to_string(i));
  inst.schema.embedding_dim = emb;
  for (size_t i = 0; i < tm; ++i) inst.schema.tweet_meta_names.push_back("m" + std::to_string(i));
  for (size_t i = 0; i < tt; ++i) inst.schema.temporal_names.push_back("t" + std::to_string(i));

  inst.params = ModelParams::Init(inst.schema, d, out_dim, seed);
  Rng rng(SubstreamSeed(seed, 0x67636b));
  std::normal_distribution<double> normal(0.0, 1.0);
  // Nonzero biases so every path carries signal.
  inst.params.ForEachTensor([&](std::string_view name, std::span<double> s) {
    if (name.ends_with("bias") || name.ends_with(".b1") || name.ends_with(".b2") || name == "head.b") {
      for (double& v : s) v = 0.1 * normal(rng);
    }
  });
  inst.views.resize(static_cast<Eigen::Index>(2 * pairs), static_cast<Eigen::Index>(width));
  for (Eigen::Index i = 0; i < inst.views.size(); ++i) inst.views.data()[i] = normal(rng);
  inst.partner = HalfPairing(pairs);
  inst.labels.resize(2 * pairs);
  for (size_t i = 0; i < pairs; ++i) inst.labels[i] = inst.labels[i + pairs] = static_cast<int>(i % 2);
  return inst;
}

}  // namespace botcon
