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
#include "botcon/loss.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace botcon {

std::string_view ToString(LossKind k) {
  switch (k) {
    case LossKind::kSelf:
      return "self";
    case LossKind::kSup:
      return "sup";
    case LossKind::kSupMod:
      return "sup_mod";
  }
  return "self";
}

LossKind ParseLossKind(std::string_view s) {
  if (s == "self" || s == "infonce") return LossKind::kSelf;
  if (s == "sup" || s == "supcon") return LossKind::kSup;
  if (s == "sup_mod" || s == "supcon_mod") return LossKind::kSupMod;
  throw ConfigError("unknown loss '" + std::string(s) + "' (expected self, sup or sup_mod)", "train.loss");
}

double Similarity(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  if (a.size() != b.size()) throw DimensionError("similarity of vectors with different lengths");
  return a.dot(b);
}

LossResult ContrastiveLoss(LossKind kind, const Matrix& z, std::span<const size_t> partner, std::span<const int> labels,
                           double temperature, bool with_grad) {
  const auto m = static_cast<size_t>(z.rows());
  if (!(temperature > 0.0)) throw ConfigError("temperature must be positive", "train.temperature");
  if (m < 4 || m % 2 != 0) {
    throw ConfigError("contrastive loss needs at least 2 pairs (got " + std::to_string(m) + " rows)", "train.batch_size");
  }
  if (partner.size() != m) throw DimensionError("pairing length does not match the number of embeddings");
  for (size_t i = 0; i < m; ++i) {
    if (partner[i] >= m || partner[i] == i || partner[partner[i]] != i) {
      throw ConfigError("pairing is not a fixed-point-free involution at index " + std::to_string(i), "pairing");
    }
  }
  const bool supervised = kind != LossKind::kSelf;
  if (supervised) {
    if (labels.size() != m) throw DimensionError("label count does not match the number of embeddings");
    for (size_t i = 0; i < m; ++i) {
      if (labels[i] != labels[partner[i]]) {
        throw DefinitionError("view at index " + std::to_string(partner[i]) + " does not inherit the label of index " +
                              std::to_string(i));
      }
    }
  }

  const Matrix s = (z * z.transpose()) / temperature;
  LossResult out;
  if (with_grad) out.grad = Matrix::Zero(z.rows(), z.cols());
  // coef(i, k) = dL/dS(i, k)
  Matrix coef;
  if (with_grad) coef = Matrix::Zero(z.rows(), z.rows());

  std::vector<size_t> positives, denominator;
  double total = 0.0;
  for (size_t i = 0; i < m; ++i) {
    positives.clear();
    denominator.clear();
    for (size_t k = 0; k < m; ++k) {
      if (k == i) continue;
      const bool same = supervised ? labels[k] == labels[i] : k == partner[i];
      if (same) positives.push_back(k);
      if (kind != LossKind::kSupMod || !same) denominator.push_back(k);
    }
    if (positives.empty()) throw DefinitionError("index " + std::to_string(i) + " has no positive in the batch");
    if (denominator.empty()) {
      throw ConfigError("index " + std::to_string(i) + " has no negative in the batch (single-class batch)", "train.loss");
    }

    const auto ii = static_cast<Eigen::Index>(i);
    double max_s = -std::numeric_limits<double>::infinity();
    for (size_t k : denominator) max_s = std::max(max_s, s(ii, static_cast<Eigen::Index>(k)));
    double sum_exp = 0.0;
    for (size_t k : denominator) sum_exp += std::exp(s(ii, static_cast<Eigen::Index>(k)) - max_s);
    const double lse = max_s + std::log(sum_exp);

    double pos_mean = 0.0;
    for (size_t p : positives) pos_mean += s(ii, static_cast<Eigen::Index>(p));
    pos_mean /= static_cast<double>(positives.size());
    total += lse - pos_mean;

    if (with_grad) {
      const double inv_p = 1.0 / static_cast<double>(positives.size());
      for (size_t p : positives) coef(ii, static_cast<Eigen::Index>(p)) -= inv_p;
      for (size_t k : denominator) {
        const auto kk = static_cast<Eigen::Index>(k);
        coef(ii, kk) += std::exp(s(ii, kk) - lse);
      }
    }
  }
  const double scale = 1.0 / static_cast<double>(m);
  out.value = total * scale;
  if (with_grad) {
    // S = Z Z^T / tau, so dL/dZ = (C + C^T) Z / tau.
    out.grad.noalias() = ((coef + coef.transpose()) * z) * (scale / temperature);
  }
  return out;
}

double InfoNce(const Matrix& z, std::span<const size_t> partner, double temperature) {
  return ContrastiveLoss(LossKind::kSelf, z, partner, {}, temperature, false).value;
}

double SupCon(const Matrix& z, std::span<const int> labels, std::span<const size_t> partner, double temperature) {
  return ContrastiveLoss(LossKind::kSup, z, partner, labels, temperature, false).value;
}

double SupConMod(const Matrix& z, std::span<const int> labels, std::span<const size_t> partner, double temperature) {
  return ContrastiveLoss(LossKind::kSupMod, z, partner, labels, temperature, false).value;
}

}  // namespace botcon
