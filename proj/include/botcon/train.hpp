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
#ifndef BOTCON_TRAIN_HPP_
#define BOTCON_TRAIN_HPP_

#include <functional>
#include <span>
#include <vector>

#include "botcon/augmentation.hpp"
#include "botcon/dataset.hpp"
#include "botcon/loss.hpp"
#include "botcon/model.hpp"
#include "botcon/optimizer.hpp"

namespace botcon {

struct TrainConfig {
  int batch_size = 512;
  int epochs = 5000;
  double learning_rate = 0.001;
  double temperature = 1.0;
  LossKind loss = LossKind::kSelf;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  uint64_t seed = 0;
  // Representation width per category (the encoder input is 4 * d wide).
  size_t d = 16;
  size_t out_dim = 64;

  void Validate() const;
};

struct TrainHistory {
  std::vector<double> epoch_loss;     // mean batch loss per epoch
  std::vector<double> epoch_seconds;  // wall clock; excluded from determinism checks
  uint64_t seed = 0;
  uint64_t fingerprint = 0;  // ModelParams::Fingerprint() of the final parameters
  size_t steps = 0;
};

struct TrainResult {
  ModelParams params;
  TrainHistory history;
};

struct BatchLoss {
  double loss = 0.0;
  ModelParams grads;
};

// Forward, loss and exact backward for one batch of 2N views.
BatchLoss LossAndGradients(const ModelParams& params, const Matrix& views, std::span<const size_t> partner,
                           std::span<const int> labels, LossKind kind, double temperature);

// Loss only, no gradients.
double BatchLossValue(const ModelParams& params, const Matrix& views, std::span<const size_t> partner,
                      std::span<const int> labels, LossKind kind, double temperature);

using EpochCallback = std::function<void(int epoch, double loss)>;

// Per epoch: seeded shuffle, mini-batches of batch_size (a final batch with
// fewer than 4 rows is dropped), views, loss, backward, optimizer step.
// `train` must already be normalized.
TrainResult Train(const Dataset& train, const TrainConfig& cfg, const AugmentationConfig& aug,
                  const EpochCallback& on_epoch = {});

// Continue training from given parameters (used by tests and sweeps).
TrainResult Train(const Dataset& train, const TrainConfig& cfg, const AugmentationConfig& aug, ModelParams init,
                  const EpochCallback& on_epoch = {});

}  // namespace botcon

#endif  // BOTCON_TRAIN_HPP_
