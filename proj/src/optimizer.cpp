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
#include "botcon/optimizer.hpp"

#include <cmath>
#include <string>

namespace botcon {

std::string_view ToString(OptimizerKind k) { return k == OptimizerKind::kAdam ? "adam" : "sgd"; }

OptimizerKind ParseOptimizerKind(std::string_view s) {
  if (s == "adam") return OptimizerKind::kAdam;
  if (s == "sgd") return OptimizerKind::kSgd;
  throw ConfigError("unknown optimizer '" + std::string(s) + "'", "train.optimizer");
}

AdamState AdamState::For(const ModelParams& params) {
  AdamState s;
  params.ForEachTensor([&](std::string_view, std::span<const double> t) {
    s.first_moment.push_back(Vector::Zero(static_cast<Eigen::Index>(t.size())));
    s.second_moment.push_back(Vector::Zero(static_cast<Eigen::Index>(t.size())));
  });
  return s;
}

void AdamStep(AdamState& state, ModelParams& params, const ModelParams& grads, double learning_rate) {
  std::vector<std::span<const double>> g;
  grads.ForEachTensor([&](std::string_view, std::span<const double> t) { g.push_back(t); });
  if (g.size() != state.first_moment.size()) throw DimensionError("Adam state does not match the parameter layout");

  ++state.step;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  size_t k = 0;
  params.ForEachTensor([&](std::string_view name, std::span<double> p) {
    const auto& gk = g[k];
    auto& m = state.first_moment[k];
    auto& v = state.second_moment[k];
    if (gk.size() != p.size() || static_cast<size_t>(m.size()) != p.size()) {
      throw DimensionError("shape mismatch in tensor " + std::string(name));
    }
    for (size_t i = 0; i < p.size(); ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      m[ii] = state.beta1 * m[ii] + (1.0 - state.beta1) * gk[i];
      v[ii] = state.beta2 * v[ii] + (1.0 - state.beta2) * gk[i] * gk[i];
      p[i] -= learning_rate * (m[ii] / c1) / (std::sqrt(v[ii] / c2) + state.epsilon);
    }
    ++k;
  });
}

void SgdStep(ModelParams& params, const ModelParams& grads, double learning_rate) {
  std::vector<std::span<const double>> g;
  grads.ForEachTensor([&](std::string_view, std::span<const double> t) { g.push_back(t); });
  size_t k = 0;
  params.ForEachTensor([&](std::string_view name, std::span<double> p) {
    if (k >= g.size() || g[k].size() != p.size()) throw DimensionError("shape mismatch in tensor " + std::string(name));
    for (size_t i = 0; i < p.size(); ++i) p[i] -= learning_rate * g[k][i];
    ++k;
  });
}

}  // namespace botcon
