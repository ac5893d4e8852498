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

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace botcon {
namespace {

using testing::SmallSchema;

Dataset NormalizedSynthetic(size_t n_per_class, double sep, uint64_t seed) {
  SyntheticConfig s;
  s.n_per_class = n_per_class;
  s.class_separation = sep;
  s.schema = SmallSchema(4, 4, 3, 3);
  s.seed = seed;
  const Dataset raw = GenerateSynthetic(s);
  return ApplyNormalizer(FitNormalizer(raw), raw);
}

TrainConfig SmallConfig() {
  TrainConfig cfg;
  cfg.batch_size = 32;
  cfg.epochs = 5;
  cfg.d = 4;
  cfg.out_dim = 8;
  cfg.seed = 3;
  return cfg;
}

TEST(TrainTest, ZeroEpochsReturnsInitialParameters) {
  const Dataset ds = NormalizedSynthetic(20, 2.0, 1);
  TrainConfig cfg = SmallConfig();
  cfg.epochs = 0;
  const TrainResult r = Train(ds, cfg, AugmentationConfig{});
  EXPECT_TRUE(r.params == ModelParams::Init(ds.schema, cfg.d, cfg.out_dim, cfg.seed));
  EXPECT_TRUE(r.history.epoch_loss.empty());
}

TEST(TrainTest, BitwiseDeterministic) {
  const Dataset ds = NormalizedSynthetic(40, 2.0, 1);
  for (LossKind kind : {LossKind::kSelf, LossKind::kSup, LossKind::kSupMod}) {
    TrainConfig cfg = SmallConfig();
    cfg.loss = kind;
    const TrainResult a = Train(ds, cfg, AugmentationConfig{});
    const TrainResult b = Train(ds, cfg, AugmentationConfig{});
    EXPECT_TRUE(a.params == b.params);
    EXPECT_EQ(a.history.epoch_loss, b.history.epoch_loss);
    EXPECT_EQ(a.history.fingerprint, b.history.fingerprint);
    cfg.seed = 4;
    EXPECT_FALSE(Train(ds, cfg, AugmentationConfig{}).params == a.params);
  }
}

TEST(TrainTest, ShortFinalBatchIsDropped) {
  const Dataset ds = NormalizedSynthetic(35, 2.0, 1);  // 70 rows
  TrainConfig cfg = SmallConfig();
  cfg.batch_size = 33;  // 33 + 33 + 4
  cfg.epochs = 2;
  EXPECT_EQ(Train(ds, cfg, AugmentationConfig{}).history.steps, 6u);
  cfg.batch_size = 34;  // 34 + 34 + 2 (dropped)
  EXPECT_EQ(Train(ds, cfg, AugmentationConfig{}).history.steps, 4u);
}

TEST(TrainTest, LossDecreasesOnSeparableData) {
  const Dataset ds = NormalizedSynthetic(100, 6.0, 2);
  TrainConfig cfg = SmallConfig();
  cfg.epochs = 150;
  cfg.batch_size = 64;
  const TrainResult r = Train(ds, cfg, AugmentationConfig{});
  ASSERT_EQ(r.history.epoch_loss.size(), 150u);
  EXPECT_LT(r.history.epoch_loss.back(), r.history.epoch_loss.front());
}

TEST(TrainTest, AllAugmentationsAndViewModesRun) {
  const Dataset ds = NormalizedSynthetic(30, 2.0, 1);
  for (AugmentationKind kind : {AugmentationKind::kCorruption, AugmentationKind::kImputation, AugmentationKind::kLinear}) {
    for (ViewMode mode : {ViewMode::kOneView, ViewMode::kTwoView}) {
      AugmentationConfig aug;
      aug.kind = kind;
      aug.view_mode = mode;
      const TrainResult r = Train(ds, SmallConfig(), aug);
      for (double l : r.history.epoch_loss) EXPECT_TRUE(std::isfinite(l));
    }
  }
}

TEST(TrainTest, Errors) {
  Dataset ds = NormalizedSynthetic(10, 2.0, 1);
  TrainConfig cfg = SmallConfig();
  cfg.batch_size = 2;
  EXPECT_THROW(Train(ds, cfg, AugmentationConfig{}), ConfigError);
  cfg = SmallConfig();
  cfg.loss = LossKind::kSupMod;
  Dataset one_class = ds;
  std::fill(one_class.labels->begin(), one_class.labels->end(), 1);
  EXPECT_THROW(Train(one_class, cfg, AugmentationConfig{}), ConfigError);
  ds.labels.reset();
  EXPECT_THROW(Train(ds, cfg, AugmentationConfig{}), ConfigError);
  cfg.loss = LossKind::kSelf;
  EXPECT_NO_THROW(Train(ds, cfg, AugmentationConfig{}));
}

}  // namespace
}  // namespace botcon
