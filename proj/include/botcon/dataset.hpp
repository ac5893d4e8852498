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
#ifndef BOTCON_DATASET_HPP_
#define BOTCON_DATASET_HPP_

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "botcon/common.hpp"

namespace botcon {

// The four feature categories, in the fixed order they appear in a raw row
// and in the concatenated user representation.
enum class Category { kUserMeta = 0, kTweetText = 1, kTweetMeta = 2, kTemporal = 3 };

inline constexpr std::array<Category, 4> kCategories = {
    Category::kUserMeta, Category::kTweetText, Category::kTweetMeta, Category::kTemporal};

std::string_view CategoryName(Category c);

struct ColumnSpan {
  size_t offset = 0;
  size_t size = 0;
};

// Named feature columns partitioned into the four categories. The tweet-text
// category is an anonymous block of `embedding_dim` averaged sentence
// embedding coordinates named embedding_0..embedding_{E-1}.
struct FeatureSchema {
  std::vector<std::string> user_meta_names;
  size_t embedding_dim = 768;
  std::vector<std::string> tweet_meta_names;
  std::vector<std::string> temporal_names;

  // 33 user-metadata, 29 tweet-metadata and 7 temporal account features.
  static FeatureSchema Default(size_t embedding_dim = 768);

  void Validate() const;
  size_t width() const;
  ColumnSpan span(Category c) const;
  std::vector<std::string> column_names() const;
  std::optional<size_t> column_index(std::string_view name) const;
  uint64_t hash() const;

  bool operator==(const FeatureSchema&) const = default;
};

// Immutable-by-convention container: feature matrix (one row per account),
// optional binary labels (1 = bot) and opaque account ids.
struct Dataset {
  FeatureSchema schema;
  Matrix rows;
  std::optional<std::vector<int>> labels;
  std::vector<std::string> ids;

  size_t size() const { return static_cast<size_t>(rows.rows()); }
  void Validate() const;
  Dataset Subset(std::span<const size_t> indices) const;
  const std::vector<int>& RequireLabels() const;
};

// Per-column z-score statistics for every column outside the embedding block.
struct NormStats {
  std::vector<size_t> columns;
  Vector means;
  Vector stds;
  uint64_t schema_hash = 0;
  size_t width = 0;
};

inline constexpr double kZeroVarianceThreshold = 1e-12;

NormStats FitNormalizer(const Dataset& train);
Dataset ApplyNormalizer(const NormStats& stats, const Dataset& ds);
// Row-level variant used on the query path of the attack harness.
void NormalizeRow(const NormStats& stats, Eigen::Ref<Vector> row);

// Stratified, seeded split. Per class, round(test_fraction * n_class) rows
// (clamped to [1, n_class - 1]) go to the test side.
std::pair<Dataset, Dataset> SplitDataset(const Dataset& ds, double test_fraction, uint64_t seed);

struct SyntheticConfig {
  size_t n_per_class = 1000;
  double class_separation = 4.0;
  uint64_t seed = 0;
  FeatureSchema schema = FeatureSchema::Default();
  // Seed for the shared class geometry (base means, scales, class direction).
  // Two datasets with equal structure_seed share class structure.
  uint64_t structure_seed = 0;
  // Signed per-column marginal shift in units of within-class std.
  double marginal_shift = 0.0;
  // Strength of the within-class covariance remix; 0 gives independent columns.
  double covariance_mix = 0.0;

  void Validate() const;
};

Dataset GenerateSynthetic(const SyntheticConfig& cfg);

nlohmann::ordered_json SchemaToJson(const FeatureSchema& schema);
FeatureSchema SchemaFromJson(const nlohmann::json& j);

// CSV with a JSON schema sidecar at <stem>.schema.json.
std::filesystem::path SchemaSidecarPath(const std::filesystem::path& csv_path);
void SaveDataset(const Dataset& ds, const std::filesystem::path& csv_path);
Dataset LoadDataset(const std::filesystem::path& csv_path);

// Reads a per-tweet embedding CSV (`id,embedding_0,...`; several rows per
// account) and writes each account's averaged embedding into the tweet-text
// block of `ds`. Accounts without any tweet rows raise DataError.
void AttachTweetEmbeddings(Dataset& ds, const std::filesystem::path& csv_path);

}  // namespace botcon

#endif  // BOTCON_DATASET_HPP_
