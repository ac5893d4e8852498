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
#ifndef BOTCON_CHECKPOINT_HPP_
#define BOTCON_CHECKPOINT_HPP_

#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

#include "botcon/config.hpp"
#include "botcon/evaluation.hpp"

namespace botcon {

inline constexpr int kCheckpointVersion = 1;

// Everything needed to rebuild the frozen pipeline. Doubles are written in
// shortest round-trip form, so save/load is exact.
struct Checkpoint {
  FeatureSchema schema;
  NormStats norm;
  ModelParams model;
  std::optional<ProbeParams> probe;
  TrainConfig train;
  AugmentationConfig augmentation;
  TrainHistory history;  // epoch_seconds is not stored

  Pipeline pipeline() const;  // throws ConfigError without a probe
};

nlohmann::ordered_json ToJson(const Checkpoint& ckpt);
Checkpoint CheckpointFromJson(const nlohmann::json& j);

nlohmann::ordered_json ToJson(const NormStats& stats);
NormStats NormStatsFromJson(const nlohmann::json& j);
nlohmann::ordered_json ToJson(const ProbeParams& probe);
ProbeParams ProbeParamsFromJson(const nlohmann::json& j);
nlohmann::ordered_json ToJson(const TrainHistory& history, bool normalized);

void SaveCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
// Missing file -> ConfigError on field "paths.checkpoint"; malformed -> ParseError.
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace botcon

#endif  // BOTCON_CHECKPOINT_HPP_
