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
#include "botcon/representation.hpp"

#include <cmath>
#include <string>

namespace botcon {

LinearBlock LinearBlock::Init(size_t out, size_t in, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(in)));
  LinearBlock b;
  b.weight.resize(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
  for (Eigen::Index i = 0; i < b.weight.size(); ++i) b.weight.data()[i] = normal(rng);
  b.bias = Vector::Zero(static_cast<Eigen::Index>(out));
  return b;
}

Vector ProjectBlock(const LinearBlock& block, const Eigen::Ref<const Vector>& x) {
  if (static_cast<size_t>(x.size()) != block.in_dim()) {
    throw DimensionError("block expects input of length " + std::to_string(block.in_dim()) + ", got " +
                         std::to_string(x.size()));
  }
  return block.weight * x + block.bias;
}

Vector AverageEmbeddings(std::span<const Vector> tweet_embeddings) {
  if (tweet_embeddings.empty()) throw DataError("cannot average an empty list of tweet embeddings");
  const auto dim = tweet_embeddings.front().size();
  Vector sum = Vector::Zero(dim);
  for (const auto& e : tweet_embeddings) {
    if (e.size() != dim) throw DimensionError("tweet embeddings have inconsistent lengths");
    sum += e;
  }
  return sum / static_cast<double>(tweet_embeddings.size());
}

RepresentationParams RepresentationParams::Init(const FeatureSchema& schema, size_t d, Rng& rng) {
  if (d == 0) throw ConfigError("representation dimension d must be positive", "train.d");
  RepresentationParams p;
  p.d = d;
  for (Category c : kCategories) p.block(c) = LinearBlock::Init(d, schema.span(c).size, rng);
  return p;
}

size_t RepresentationParams::input_width() const {
  size_t w = 0;
  for (const auto& b : blocks) w += b.in_dim();
  return w;
}

size_t RepresentationParams::input_offset(Category c) const {
  size_t offset = 0;
  for (size_t k = 0; k < static_cast<size_t>(c); ++k) offset += blocks[k].in_dim();
  return offset;
}

Vector BuildRepresentation(const RepresentationParams& params, const Eigen::Ref<const Vector>& normalized_row) {
  if (static_cast<size_t>(normalized_row.size()) != params.input_width()) {
    throw DimensionError("row width " + std::to_string(normalized_row.size()) + " does not match representation input width " +
                         std::to_string(params.input_width()));
  }
  const auto d = static_cast<Eigen::Index>(params.d);
  Vector out(4 * d);
  for (Category c : kCategories) {
    const auto& b = params.block(c);
    const auto k = static_cast<Eigen::Index>(c);
    out.segment(k * d, d) =
        ProjectBlock(b, normalized_row.segment(static_cast<Eigen::Index>(params.input_offset(c)),
                                               static_cast<Eigen::Index>(b.in_dim())));
  }
  return out;
}

Matrix BuildRepresentationBatch(const RepresentationParams& params, const Matrix& rows) {
  if (static_cast<size_t>(rows.cols()) != params.input_width()) {
    throw DimensionError("batch width " + std::to_string(rows.cols()) + " does not match representation input width " +
                         std::to_string(params.input_width()));
  }
  const auto d = static_cast<Eigen::Index>(params.d);
  Matrix out(rows.rows(), 4 * d);
  for (Category c : kCategories) {
    const auto& b = params.block(c);
    const auto k = static_cast<Eigen::Index>(c);
    out.middleCols(k * d, d).noalias() =
        rows.middleCols(static_cast<Eigen::Index>(params.input_offset(c)), static_cast<Eigen::Index>(b.in_dim())) *
        b.weight.transpose();
    out.middleCols(k * d, d).rowwise() += b.bias.transpose();
  }
  return out;
}

}  // namespace botcon
