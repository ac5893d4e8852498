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
#include "botcon/train.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

namespace botcon {

void TrainConfig::Validate() const {
  if (batch_size < 4) throw ConfigError("batch_size must be at least 4", "train.batch_size");
  if (epochs < 0) throw ConfigError("epochs must be nonnegative", "train.epochs");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive", "train.learning_rate");
  if (!(temperature > 0.0)) throw ConfigError("temperature must be positive", "train.temperature");
  if (d == 0) throw ConfigError("d must be positive", "train.d");
  if (out_dim == 0) throw ConfigError("out_dim must be positive", "train.out_dim");
}

BatchLoss LossAndGradients(const ModelParams& params, const Matrix& views, std::span<const size_t> partner,
                           std::span<const int> labels, LossKind kind, double temperature) {
  const ForwardCache cache = Forward(params, views);
  LossResult loss = ContrastiveLoss(kind, cache.z, partner, labels, temperature, true);
  return {loss.value, Backward(params, cache, loss.grad)};
}

double BatchLossValue(const ModelParams& params, const Matrix& views, std::span<const size_t> partner,
                      std::span<const int> labels, LossKind kind, double temperature) {
  const ForwardCache cache = Forward(params, views);
  return ContrastiveLoss(kind, cache.z, partner, labels, temperature, false).value;
}

TrainResult Train(const Dataset& train, const TrainConfig& cfg, const AugmentationConfig& aug,
                  const EpochCallback& on_epoch) {
  cfg.Validate();
  return Train(train, cfg, aug, ModelParams::Init(train.schema, cfg.d, cfg.out_dim, cfg.seed), on_epoch);
}

TrainResult Train(const Dataset& train, const TrainConfig& cfg, const AugmentationConfig& aug, ModelParams init,
                  const EpochCallback& on_epoch) {
  cfg.Validate();
  aug.Validate();
  train.Validate();
  if (init.input_width() != train.schema.width()) {
    throw DimensionError("model input width does not match the dataset schema");
  }
  const bool supervised = cfg.loss != LossKind::kSelf;
  if (supervised) train.RequireLabels();
  if (cfg.epochs > 0 && train.size() < 4) throw ConfigError("training needs at least 4 rows", "data");

  TrainResult result{std::move(init), {}};
  result.history.seed = cfg.seed;
  AdamState adam = AdamState::For(result.params);
  const Augmenter augmenter(aug, train.rows);

  std::vector<size_t> order(train.size());
  const auto batch = static_cast<size_t>(cfg.batch_size);
  Matrix anchors;
  std::vector<int> view_labels;
  std::vector<size_t> partner;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::iota(order.begin(), order.end(), size_t{0});
    Rng shuffle_rng(SubstreamSeed(cfg.seed, 0x73687566, static_cast<uint64_t>(epoch)));
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double loss_sum = 0.0;
    size_t batches = 0;
    for (size_t begin = 0; begin < order.size(); begin += batch) {
      const size_t n = std::min(batch, order.size() - begin);
      if (n < 4) break;
      anchors.resize(static_cast<Eigen::Index>(n), train.rows.cols());
      for (size_t i = 0; i < n; ++i) anchors.row(static_cast<Eigen::Index>(i)) = train.rows.row(static_cast<Eigen::Index>(order[begin + i]));
      const ViewBatch views = MakeViews(anchors, augmenter, aug.seed, static_cast<uint64_t>(epoch), begin);
      if (partner.size() != 2 * n) partner = HalfPairing(n);
      view_labels.clear();
      if (supervised) {
        view_labels.resize(2 * n);
        for (size_t i = 0; i < n; ++i) view_labels[i] = view_labels[i + n] = (*train.labels)[order[begin + i]];
      }

      BatchLoss step = LossAndGradients(result.params, views.views, partner, view_labels, cfg.loss, cfg.temperature);
      if (cfg.optimizer == OptimizerKind::kAdam) {
        AdamStep(adam, result.params, step.grads, cfg.learning_rate);
      } else {
        SgdStep(result.params, step.grads, cfg.learning_rate);
      }
      loss_sum += step.loss;
      ++batches;
      ++result.history.steps;
    }
    const double epoch_loss = batches > 0 ? loss_sum / static_cast<double>(batches) : 0.0;
    result.history.epoch_loss.push_back(epoch_loss);
    result.history.epoch_seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    if (on_epoch) on_epoch(epoch, epoch_loss);
  }
  result.history.fingerprint = result.params.Fingerprint();
  return result;
}

}  // namespace botcon
