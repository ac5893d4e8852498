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
#ifndef BOTCON_OPTIMIZER_HPP_
#define BOTCON_OPTIMIZER_HPP_

#include <string_view>
#include <vector>

#include "botcon/model.hpp"

namespace botcon {

enum class OptimizerKind { kAdam, kSgd };

std::string_view ToString(OptimizerKind k);
OptimizerKind ParseOptimizerKind(std::string_view s);

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int64_t step = 0;
  // One accumulator per tensor, in ModelParams::ForEachTensor order.
  std::vector<Vector> first_moment;
  std::vector<Vector> second_moment;

  static AdamState For(const ModelParams& params);
};

// Bias-corrected Adam update.
void AdamStep(AdamState& state, ModelParams& params, const ModelParams& grads, double learning_rate);

void SgdStep(ModelParams& params, const ModelParams& grads, double learning_rate);

}  // namespace botcon

#endif  // BOTCON_OPTIMIZER_HPP_
