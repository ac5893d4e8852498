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
#include "botcon/augmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/QR>

#include "botcon/log.hpp"

namespace botcon {

std::string_view ToString(AugmentationKind k) {
  switch (k) {
    case AugmentationKind::kCorruption:
      return "corruption";
    case AugmentationKind::kImputation:
      return "imputation";
    case AugmentationKind::kLinear:
      return "linear";
  }
  return "corruption";
}

std::string_view ToString(ViewMode m) { return m == ViewMode::kOneView ? "one_view" : "two_view"; }

AugmentationKind ParseAugmentationKind(std::string_view s) {
  if (s == "corruption") return AugmentationKind::kCorruption;
  if (s == "imputation" || s == "mice") return AugmentationKind::kImputation;
  if (s == "linear") return AugmentationKind::kLinear;
  throw ConfigError("unknown augmentation kind '" + std::string(s) + "'", "augmentation.kind");
}

ViewMode ParseViewMode(std::string_view s) {
  if (s == "one_view") return ViewMode::kOneView;
  if (s == "two_view") return ViewMode::kTwoView;
  throw ConfigError("unknown view mode '" + std::string(s) + "'", "augmentation.view_mode");
}

void AugmentationConfig::Validate() const {
  if (!(corruption_rate >= 0.0 && corruption_rate <= 1.0)) {
    throw ConfigError("corruption_rate must lie in [0, 1]", "augmentation.corruption_rate");
  }
  if (!(nan_rate >= 0.0 && nan_rate <= 1.0)) throw ConfigError("nan_rate must lie in [0, 1]", "augmentation.nan_rate");
  if (mice_iterations < 1) throw ConfigError("mice_iterations must be positive", "augmentation.mice_iterations");
}

size_t ReplacementCount(double rate, size_t width) {
  if (rate <= 0.0 || width == 0) return 0;
  // The small slack absorbs representation error such as 0.7 * 10 = 7.000000000000001
  // or 0.15 * 10 = 1.4999999999999998.
  auto k = static_cast<size_t>(std::floor(rate * static_cast<double>(width) + 0.5 + 1e-9));
  return std::clamp<size_t>(k, 1, width);
}

namespace {

// Partial Fisher-Yates: k distinct indices from [0, width).
std::vector<size_t> SampleDistinct(size_t width, size_t k, Rng& rng) {
  std::vector<size_t> idx(width);
  std::iota(idx.begin(), idx.end(), size_t{0});
  for (size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<size_t> pick(i, width - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(k);
  return idx;
}

}  // namespace

Vector Corrupt(const Eigen::Ref<const Vector>& x, const Matrix& train, double rate, Rng& rng) {
  return Corrupt(x, train, rate, rng, nullptr);
}

Vector Corrupt(const Eigen::Ref<const Vector>& x, const Matrix& train, double rate, Rng& rng,
               std::vector<size_t>* selected) {
  if (static_cast<Eigen::Index>(x.size()) != train.cols()) {
    throw DimensionError("sample width does not match training matrix width");
  }
  Vector out = x;
  const size_t width = static_cast<size_t>(x.size());
  const size_t k = ReplacementCount(rate, width);
  if (selected) selected->clear();
  if (k == 0) return out;
  if (train.rows() == 0) throw DataError("corruption needs a non-empty training matrix");
  std::uniform_int_distribution<Eigen::Index> row_pick(0, train.rows() - 1);
  for (size_t j : SampleDistinct(width, k, rng)) {
    const auto jj = static_cast<Eigen::Index>(j);
    out[jj] = train(row_pick(rng), jj);
    if (selected) selected->push_back(j);
  }
  return out;
}

ChainedImputer::ChainedImputer(const Matrix& train) : train_(&train) {
  const Eigen::Index n = train.rows();
  const Eigen::Index w = train.cols();
  if (n == 0) throw DataError("imputer needs a non-empty training matrix");
  means_ = train.colwise().mean().transpose();
  models_.resize(static_cast<size_t>(w));
  size_t fallbacks = 0;

  // Centered Gram matrix; regressing on centered columns makes the intercept
  // the target mean minus coef . means.
  const Matrix centered = train.rowwise() - means_.transpose();
  const Matrix gram = centered.transpose() * centered;
  for (Eigen::Index j = 0; j < w; ++j) {
    ColumnModel m;
    m.coef = Vector::Zero(w);
    if (n < w) {
      m.fallback = true;
    } else {
      std::vector<Eigen::Index> others;
      others.reserve(static_cast<size_t>(w - 1));
      for (Eigen::Index k = 0; k < w; ++k)
        if (k != j) others.push_back(k);
      const auto p = static_cast<Eigen::Index>(others.size());
      Matrix a(p, p);
      Vector rhs(p);
      for (Eigen::Index r = 0; r < p; ++r) {
        rhs[r] = gram(others[static_cast<size_t>(r)], j);
        for (Eigen::Index c = 0; c < p; ++c) a(r, c) = gram(others[static_cast<size_t>(r)], others[static_cast<size_t>(c)]);
      }
      Eigen::ColPivHouseholderQR<Matrix> qr(a);
      qr.setThreshold(1e-10);
      if (p > 0 && qr.rank() < p) {
        m.fallback = true;
      } else if (p > 0) {
        const Vector beta = qr.solve(rhs);
        for (Eigen::Index r = 0; r < p; ++r) m.coef[others[static_cast<size_t>(r)]] = beta[r];
      }
    }
    if (m.fallback) {
      m.coef.setZero();
      m.intercept = means_[j];
      ++fallbacks;
    } else {
      m.intercept = means_[j] - m.coef.dot(means_);
    }
    models_[static_cast<size_t>(j)] = std::move(m);
  }
  if (fallbacks > 0) {
    LogWarning("imputer: singular regression for " + std::to_string(fallbacks) + " of " + std::to_string(w) +
               " columns; those columns use mean imputation");
  }
}

const ChainedImputer::ColumnModel& ChainedImputer::model(size_t column) const { return models_.at(column); }

bool ChainedImputer::uses_mean_fallback(size_t column) const { return model(column).fallback; }

Vector ChainedImputer::ImputeMasked(const Eigen::Ref<const Vector>& x, const std::vector<size_t>& mask,
                                    int iterations) const {
  if (x.size() != train_->cols()) throw DimensionError("sample width does not match training matrix width");
  Vector out = x;
  for (size_t j : mask) out[static_cast<Eigen::Index>(j)] = means_[static_cast<Eigen::Index>(j)];
  for (int it = 0; it < iterations; ++it) {
    for (size_t j : mask) {
      const auto& m = model(j);
      out[static_cast<Eigen::Index>(j)] = m.intercept + m.coef.dot(out);
    }
  }
  return out;
}

Vector ChainedImputer::Impute(const Eigen::Ref<const Vector>& x, double nan_rate, int iterations, Rng& rng,
                              std::vector<size_t>* masked) const {
  const size_t width = static_cast<size_t>(x.size());
  const size_t k = ReplacementCount(nan_rate, width);
  std::vector<size_t> mask = k > 0 ? SampleDistinct(width, k, rng) : std::vector<size_t>{};
  if (masked) *masked = mask;
  if (mask.empty()) return x;
  return ImputeMasked(x, mask, iterations);
}

Vector ImputeAugment(const Eigen::Ref<const Vector>& x, const Matrix& train, double nan_rate, int iterations, Rng& rng) {
  if (ReplacementCount(nan_rate, static_cast<size_t>(x.size())) == 0) return x;
  ChainedImputer imputer(train);
  return imputer.Impute(x, nan_rate, iterations, rng);
}

LinearAugParams LinearAugParams::Make(size_t n, uint64_t seed) {
  Rng rng(SubstreamSeed(seed, 0x6c696e));
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(n)));
  LinearAugParams p;
  p.seed = seed;
  p.weight.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < p.weight.size(); ++i) p.weight.data()[i] = normal(rng);
  p.bias = Vector::Zero(static_cast<Eigen::Index>(n));
  return p;
}

Vector LinearAugment(const LinearAugParams& params, const Eigen::Ref<const Vector>& x) {
  if (x.size() != params.weight.cols()) {
    throw DimensionError("linear augmentation expects length " + std::to_string(params.weight.cols()) + ", got " +
                         std::to_string(x.size()));
  }
  return params.weight * x + params.bias;
}

Augmenter::Augmenter(const AugmentationConfig& cfg, const Matrix& train) : cfg_(cfg), train_(&train) {
  cfg_.Validate();
  switch (cfg_.kind) {
    case AugmentationKind::kCorruption:
      break;
    case AugmentationKind::kImputation:
      imputer_ = std::make_unique<ChainedImputer>(train);
      break;
    case AugmentationKind::kLinear:
      linear_ = LinearAugParams::Make(static_cast<size_t>(train.cols()), cfg_.seed);
      break;
  }
}

Vector Augmenter::Apply(const Eigen::Ref<const Vector>& x, Rng& rng) const {
  switch (cfg_.kind) {
    case AugmentationKind::kCorruption:
      return Corrupt(x, *train_, cfg_.corruption_rate, rng);
    case AugmentationKind::kImputation:
      return imputer_->Impute(x, cfg_.nan_rate, cfg_.mice_iterations, rng);
    case AugmentationKind::kLinear:
      return LinearAugment(*linear_, x);
  }
  return x;
}

ViewBatch MakeViews(const Matrix& anchors, const Augmenter& augmenter, uint64_t seed, uint64_t stream,
                    uint64_t first_index) {
  const Eigen::Index n = anchors.rows();
  if (n == 0) throw ConfigError("cannot build views for an empty batch", "train.batch_size");
  ViewBatch out;
  out.pairs = static_cast<size_t>(n);
  out.views.resize(2 * n, anchors.cols());
  const bool two_view = augmenter.config().view_mode == ViewMode::kTwoView;
  for (Eigen::Index i = 0; i < n; ++i) {
    Rng rng(SubstreamSeed(seed, stream, first_index + static_cast<uint64_t>(i)));
    const Vector anchor = anchors.row(i).transpose();
    if (two_view) {
      out.views.row(i) = augmenter.Apply(anchor, rng).transpose();
    } else {
      out.views.row(i) = anchors.row(i);
    }
    out.views.row(n + i) = augmenter.Apply(anchor, rng).transpose();
  }
  return out;
}

std::vector<size_t> HalfPairing(size_t pairs) {
  std::vector<size_t> partner(2 * pairs);
  for (size_t i = 0; i < pairs; ++i) {
    partner[i] = i + pairs;
    partner[i + pairs] = i;
  }
  return partner;
}

}  // namespace botcon
