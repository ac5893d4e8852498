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
#ifndef BOTCON_LOSS_HPP_
#define BOTCON_LOSS_HPP_

#include <span>
#include <string_view>

#include "botcon/common.hpp"

namespace botcon {

// kSelf: InfoNCE, the partner is the only positive, every other index is in
// the denominator. kSup: all same-label indices are positives, denominator
// as kSelf. kSupMod: as kSup, but the denominator only holds other-label
// indices.
enum class LossKind { kSelf, kSup, kSupMod };

std::string_view ToString(LossKind k);
LossKind ParseLossKind(std::string_view s);

// Cosine similarity of unit vectors.
double Similarity(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

struct LossResult {
  double value = 0.0;
  Matrix grad;  // dL/dZ, same shape as Z; empty unless requested
};

// Z holds 2N unit rows; partner is an involution without fixed points. The
// per-index terms are summed over all 2N indices and divided by 2N. Labels
// are ignored for kSelf and must satisfy labels[partner[i]] == labels[i]
// otherwise.
LossResult ContrastiveLoss(LossKind kind, const Matrix& z, std::span<const size_t> partner, std::span<const int> labels,
                           double temperature, bool with_grad = true);

double InfoNce(const Matrix& z, std::span<const size_t> partner, double temperature);
double SupCon(const Matrix& z, std::span<const int> labels, std::span<const size_t> partner, double temperature);
double SupConMod(const Matrix& z, std::span<const int> labels, std::span<const size_t> partner, double temperature);

}  // namespace botcon

#endif  // BOTCON_LOSS_HPP_
