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
#ifndef BOTCON_REPRESENTATION_HPP_
#define BOTCON_REPRESENTATION_HPP_

#include <array>
#include <span>

#include "botcon/common.hpp"
#include "botcon/dataset.hpp"

namespace botcon {

// y = x W^T + b, W is out x in.
struct LinearBlock {
  Matrix weight;
  Vector bias;

  size_t in_dim() const { return static_cast<size_t>(weight.cols()); }
  size_t out_dim() const { return static_cast<size_t>(weight.rows()); }

  // Gaussian weights with variance 1/in, zero bias.
  static LinearBlock Init(size_t out, size_t in, Rng& rng);
};

Vector ProjectBlock(const LinearBlock& block, const Eigen::Ref<const Vector>& x);

// Elementwise mean of per-tweet embedding vectors.
Vector AverageEmbeddings(std::span<const Vector> tweet_embeddings);

// Four category blocks, each mapping its slice of the normalized raw row to
// d outputs. The concatenated representation has width 4*d in category order.
struct RepresentationParams {
  size_t d = 16;
  std::array<LinearBlock, 4> blocks;

  static RepresentationParams Init(const FeatureSchema& schema, size_t d, Rng& rng);

  LinearBlock& block(Category c) { return blocks[static_cast<size_t>(c)]; }
  const LinearBlock& block(Category c) const { return blocks[static_cast<size_t>(c)]; }
  size_t input_width() const;
  size_t output_width() const { return 4 * d; }
  // Offset of category c inside the raw row, implied by the block input widths.
  size_t input_offset(Category c) const;
};

Vector BuildRepresentation(const RepresentationParams& params, const Eigen::Ref<const Vector>& normalized_row);

// Batched form: one output row per input row.
Matrix BuildRepresentationBatch(const RepresentationParams& params, const Matrix& rows);

}  // namespace botcon

#endif  // BOTCON_REPRESENTATION_HPP_
