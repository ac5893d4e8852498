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
#ifndef BOTCON_CONFIG_HPP_
#define BOTCON_CONFIG_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "botcon/adversarial.hpp"
#include "botcon/augmentation.hpp"
#include "botcon/evaluation.hpp"
#include "botcon/train.hpp"

namespace botcon {

// Build identifier baked in at configure time (git describe).
std::string_view BuildId();

struct PathsConfig {
  std::string out = "out";
  // Labelled dataset CSV; empty means "generate synthetic data".
  std::string data;
  // LOBO target dataset CSV; empty means "generate the shifted synthetic twin".
  std::string target_data;
  // Defaults to <out>/checkpoint.json.
  std::string checkpoint;
  // Optional per-tweet embedding CSV averaged into the tweet-text block.
  std::string tweet_embeddings;
};

struct DataConfig {
  size_t n_per_class = 1000;
  double class_separation = 4.0;
  size_t embedding_dim = 768;
  double marginal_shift = 0.0;
  double covariance_mix = 0.0;
  double test_fraction = 0.2;
};

struct LoboConfig {
  double target_marginal_shift = 0.5;
  double target_covariance_mix = 0.5;
};

struct AttackConfig {
  AttackSpec spec = AttackSpec::Default(AttackGroup::kTemporal);
  size_t per_class = 100;
  // True when [[attack.grids]] was given explicitly; otherwise the group default.
  bool custom_grids = false;
};

struct SweepConfig {
  std::vector<double> corruption_rates = {0.4, 0.5, 0.6, 0.7, 0.8};
  std::vector<int> batch_sizes = {128, 256, 512};
  std::vector<int> epochs = {100, 500, 1000};
  std::vector<LossKind> losses = {LossKind::kSelf, LossKind::kSup, LossKind::kSupMod};
};

struct GradCheckConfig {
  size_t pairs = 8;
  size_t width = 20;
  size_t d = 4;
  size_t out_dim = 8;
  double eps = 1e-5;
  double tolerance = 1e-5;
};

struct RunConfig {
  uint64_t seed = 0;
  PathsConfig paths;
  DataConfig data;
  LoboConfig lobo;
  TrainConfig train;
  AugmentationConfig augmentation;
  ProbeConfig probe;
  AttackConfig attack;
  SweepConfig sweep;
  GradCheckConfig gradcheck;

  // Propagates the global seed into every sub-config.
  void DeriveSeeds();
  void Validate() const;

  std::filesystem::path checkpoint_path() const;
  SyntheticConfig synthetic(bool lobo_target) const;
  uint64_t split_seed() const;
};

// Seeds of every random stream, derived from the single global seed.
uint64_t DerivedSeed(uint64_t global_seed, std::string_view stream);

// Parses TOML text. Unknown keys and type mismatches raise ConfigError with
// the dotted field path.
RunConfig ParseRunConfig(std::string_view toml_text, const std::vector<std::string>& overrides = {});
RunConfig LoadRunConfig(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

// Effective configuration as embedded in every report. Key order is fixed.
nlohmann::ordered_json ToJson(const RunConfig& cfg);
// TOML rendering that ParseRunConfig reads back to an equal configuration.
std::string ToToml(const RunConfig& cfg);

nlohmann::ordered_json ToJson(const TrainConfig& cfg);
nlohmann::ordered_json ToJson(const AugmentationConfig& cfg);
nlohmann::ordered_json ToJson(const ProbeConfig& cfg);
TrainConfig TrainConfigFromJson(const nlohmann::json& j);
AugmentationConfig AugmentationConfigFromJson(const nlohmann::json& j);

}  // namespace botcon

#endif  // BOTCON_CONFIG_HPP_
