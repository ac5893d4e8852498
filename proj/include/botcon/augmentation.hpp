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
#ifndef BOTCON_AUGMENTATION_HPP_
#define BOTCON_AUGMENTATION_HPP_

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "botcon/common.hpp"

namespace botcon {

enum class AugmentationKind { kCorruption, kImputation, kLinear };
enum class ViewMode { kOneView, kTwoView };

std::string_view ToString(AugmentationKind k);
std::string_view ToString(ViewMode m);
AugmentationKind ParseAugmentationKind(std::string_view s);
ViewMode ParseViewMode(std::string_view s);

struct AugmentationConfig {
  AugmentationKind kind = AugmentationKind::kCorruption;
  double corruption_rate = 0.6;
  double nan_rate = 0.3;
  int mice_iterations = 5;
  ViewMode view_mode = ViewMode::kOneView;
  uint64_t seed = 0;

  void Validate() const;
};

// round-half-up(rate * width), at least 1 when rate > 0, at most width.
size_t ReplacementCount(double rate, size_t width);

// Replaces ReplacementCount(rate, width) distinct coordinates of x, each with
// the same column of an independently drawn training row.
Vector Corrupt(const Eigen::Ref<const Vector>& x, const Matrix& train, double rate, Rng& rng);

// Same, also reporting which coordinates were selected.
Vector Corrupt(const Eigen::Ref<const Vector>& x, const Matrix& train, double rate, Rng& rng,
               std::vector<size_t>* selected);

// Chained-equation imputer. Per-column least-squares models (column j on all
// other columns plus an intercept) are fit once on the training matrix and
// cached; columns whose design is rank-deficient fall back to the column mean.
class ChainedImputer {
 public:
  explicit ChainedImputer(const Matrix& train);

  // Masks round(nan_rate * width) coordinates, initializes them to training
  // means and runs `iterations` rounds of regression re-prediction.
  Vector Impute(const Eigen::Ref<const Vector>& x, double nan_rate, int iterations, Rng& rng,
                std::vector<size_t>* masked = nullptr) const;

  // Deterministic core: impute the given coordinates of x.
  Vector ImputeMasked(const Eigen::Ref<const Vector>& x, const std::vector<size_t>& mask, int iterations) const;

  bool uses_mean_fallback(size_t column) const;

 private:
  struct ColumnModel {
    bool fallback = false;
    double intercept = 0.0;
    Vector coef;  // over all columns; coef[j] == 0 for the target column
  };
  const ColumnModel& model(size_t column) const;

  const Matrix* train_;
  Vector means_;
  std::vector<ColumnModel> models_;
};

Vector ImputeAugment(const Eigen::Ref<const Vector>& x, const Matrix& train, double nan_rate, int iterations, Rng& rng);

struct LinearAugParams {
  Matrix weight;  // N x N
  Vector bias;    // N
  uint64_t seed = 0;

  // Gaussian weights with variance 1/N, zero bias.
  static LinearAugParams Make(size_t n, uint64_t seed);
};

Vector LinearAugment(const LinearAugParams& params, const Eigen::Ref<const Vector>& x);

// Bundles an augmentation config with the state it needs (training matrix,
// cached imputer, fixed linear map). The training matrix must outlive it.
class Augmenter {
 public:
  Augmenter(const AugmentationConfig& cfg, const Matrix& train);

  Vector Apply(const Eigen::Ref<const Vector>& x, Rng& rng) const;
  const AugmentationConfig& config() const { return cfg_; }

 private:
  AugmentationConfig cfg_;
  const Matrix* train_;
  std::unique_ptr<ChainedImputer> imputer_;
  std::optional<LinearAugParams> linear_;
};

// 2N rows: rows [0, N) are the first members, rows [N, 2N) their partners.
struct ViewBatch {
  Matrix views;
  size_t pairs = 0;
};

// one_view: (anchor, a(anchor)); two_view: (a(anchor), a'(anchor)). Row i
// draws from its own substream SubstreamSeed(seed, stream, first_index + i),
// so the result does not depend on evaluation order. The training loop uses
// the epoch as stream and the position within the epoch as index.
ViewBatch MakeViews(const Matrix& anchors, const Augmenter& augmenter, uint64_t seed, uint64_t stream = 0,
                    uint64_t first_index = 0);

// partner[i] for the ViewBatch layout.
std::vector<size_t> HalfPairing(size_t pairs);

}  // namespace botcon

#endif  // BOTCON_AUGMENTATION_HPP_
