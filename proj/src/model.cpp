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
#include "botcon/model.hpp"

#include <cmath>
#include <string>

#include "botcon/log.hpp"

namespace botcon {
namespace {

void FillGaussian(Matrix& m, double stddev, Rng& rng) {
  std::normal_distribution<double> normal(0.0, stddev);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
}

Matrix Relu(const Matrix& x) { return x.cwiseMax(0.0); }

Matrix ReluMask(const Matrix& pre) { return (pre.array() > 0.0).cast<double>().matrix(); }

}  // namespace

ModelParams ModelParams::Init(const FeatureSchema& schema, size_t d, size_t out_dim, uint64_t seed) {
  schema.Validate();
  if (d == 0) throw ConfigError("d must be positive", "train.d");
  if (out_dim == 0) throw ConfigError("out_dim must be positive", "train.out_dim");
  Rng rng(SubstreamSeed(seed, 0x696e6974));
  ModelParams p;
  p.rep = RepresentationParams::Init(schema, d, rng);
  const auto dd = static_cast<Eigen::Index>(d);
  const auto od = static_cast<Eigen::Index>(out_dim);
  p.enc_w1.resize(dd, 4 * dd);
  FillGaussian(p.enc_w1, 1.0 / std::sqrt(4.0 * static_cast<double>(d)), rng);
  p.enc_b1 = Vector::Zero(dd);
  p.enc_w2.resize(dd, dd);
  FillGaussian(p.enc_w2, 1.0 / std::sqrt(static_cast<double>(d)), rng);
  p.enc_b2 = Vector::Zero(dd);
  p.head_w.resize(od, dd);
  FillGaussian(p.head_w, 1.0 / std::sqrt(static_cast<double>(d)), rng);
  p.head_b = Vector::Zero(od);
  return p;
}

ModelParams ModelParams::ZerosLike(const ModelParams& like) {
  ModelParams z = like;
  z.ForEachTensor([](std::string_view, std::span<double> s) { std::fill(s.begin(), s.end(), 0.0); });
  return z;
}

size_t ModelParams::parameter_count() const {
  size_t n = 0;
  ForEachTensor([&](std::string_view, std::span<const double> s) { n += s.size(); });
  return n;
}

uint64_t ModelParams::Fingerprint() const {
  Fnv1a h;
  ForEachTensor([&](std::string_view name, std::span<const double> s) {
    h.Update(std::string(name));
    h.Update(s.data(), s.size_bytes());
  });
  return h.digest();
}

bool ModelParams::operator==(const ModelParams& other) const {
  if (d() != other.d() || parameter_count() != other.parameter_count()) return false;
  bool equal = true;
  std::vector<std::span<const double>> mine;
  ForEachTensor([&](std::string_view, std::span<const double> s) { mine.push_back(s); });
  size_t k = 0;
  other.ForEachTensor([&](std::string_view, std::span<const double> s) {
    const auto& a = mine[k++];
    if (a.size() != s.size() || !std::equal(a.begin(), a.end(), s.begin())) equal = false;
  });
  return equal;
}

Encoded Encode(const ModelParams& params, const Eigen::Ref<const Vector>& normalized_row) {
  const Vector rep = BuildRepresentation(params.rep, normalized_row);
  const Vector a1 = (params.enc_w1 * rep + params.enc_b1).cwiseMax(0.0);
  Encoded out;
  out.h = (params.enc_w2 * a1 + params.enc_b2).cwiseMax(0.0);
  const Vector g = params.head_w * out.h + params.head_b;
  const double norm = g.norm();
  if (norm > 0.0) {
    out.z = g / norm;
  } else {
    LogWarning("encode: zero-norm projection, returning the first basis vector");
    out.z = Vector::Zero(g.size());
    out.z[0] = 1.0;
  }
  return out;
}

void EncodeHidden(const ModelParams& params, const Eigen::Ref<const Vector>& normalized_row, EncodeScratch& scratch,
                  Vector& h) {
  const RepresentationParams& rep = params.rep;
  if (static_cast<size_t>(normalized_row.size()) != rep.input_width()) {
    throw DimensionError("row width " + std::to_string(normalized_row.size()) +
                         " does not match representation input width " + std::to_string(rep.input_width()));
  }
  const auto d = static_cast<Eigen::Index>(rep.d);
  scratch.rep.resize(4 * d);
  for (Category c : kCategories) {
    const LinearBlock& b = rep.block(c);
    const auto k = static_cast<Eigen::Index>(c);
    scratch.rep.segment(k * d, d).noalias() =
        b.weight * normalized_row.segment(static_cast<Eigen::Index>(rep.input_offset(c)),
                                          static_cast<Eigen::Index>(b.in_dim()));
    scratch.rep.segment(k * d, d) += b.bias;
  }
  scratch.a1.noalias() = params.enc_w1 * scratch.rep;
  scratch.a1 = (scratch.a1 + params.enc_b1).cwiseMax(0.0);
  h.noalias() = params.enc_w2 * scratch.a1;
  h = (h + params.enc_b2).cwiseMax(0.0);
}

ForwardCache Forward(const ModelParams& params, const Matrix& rows) {
  ForwardCache c;
  c.input = rows;
  c.rep = BuildRepresentationBatch(params.rep, rows);
  c.pre1.noalias() = c.rep * params.enc_w1.transpose();
  c.pre1.rowwise() += params.enc_b1.transpose();
  c.act1 = Relu(c.pre1);
  c.pre2.noalias() = c.act1 * params.enc_w2.transpose();
  c.pre2.rowwise() += params.enc_b2.transpose();
  c.h = Relu(c.pre2);
  c.head.noalias() = c.h * params.head_w.transpose();
  c.head.rowwise() += params.head_b.transpose();
  c.head_norm = c.head.rowwise().norm();
  c.z.resize(c.head.rows(), c.head.cols());
  for (Eigen::Index i = 0; i < c.head.rows(); ++i) {
    if (c.head_norm[i] > 0.0) {
      c.z.row(i) = c.head.row(i) / c.head_norm[i];
    } else {
      LogWarning("forward: zero-norm projection, returning the first basis vector");
      c.z.row(i).setZero();
      c.z(i, 0) = 1.0;
    }
  }
  return c;
}

Matrix EncodeBatch(const ModelParams& params, const Matrix& rows) {
  Matrix rep = BuildRepresentationBatch(params.rep, rows);
  Matrix a1 = rep * params.enc_w1.transpose();
  a1.rowwise() += params.enc_b1.transpose();
  a1 = Relu(a1);
  Matrix h = a1 * params.enc_w2.transpose();
  h.rowwise() += params.enc_b2.transpose();
  return Relu(h);
}

namespace {

// Accumulates encoder and representation gradients into g given dL/dh.
void BackwardEncoder(const ModelParams& params, const ForwardCache& c, const Matrix& grad_h, ModelParams& g) {
  Matrix d_pre2 = grad_h.cwiseProduct(ReluMask(c.pre2));
  g.enc_w2.noalias() = d_pre2.transpose() * c.act1;
  g.enc_b2 = d_pre2.colwise().sum().transpose();

  Matrix d_pre1 = (d_pre2 * params.enc_w2).cwiseProduct(ReluMask(c.pre1));
  g.enc_w1.noalias() = d_pre1.transpose() * c.rep;
  g.enc_b1 = d_pre1.colwise().sum().transpose();

  const Matrix d_rep = d_pre1 * params.enc_w1;
  const auto d = static_cast<Eigen::Index>(params.d());
  for (Category cat : kCategories) {
    const auto k = static_cast<Eigen::Index>(cat);
    const auto& block = params.rep.block(cat);
    auto& gb = g.rep.block(cat);
    const auto d_out = d_rep.middleCols(k * d, d);
    gb.weight.noalias() = d_out.transpose() * c.input.middleCols(static_cast<Eigen::Index>(params.rep.input_offset(cat)),
                                                                  static_cast<Eigen::Index>(block.in_dim()));
    gb.bias = d_out.colwise().sum().transpose();
  }
}

}  // namespace

ModelParams Backward(const ModelParams& params, const ForwardCache& c, const Matrix& grad_z) {
  if (grad_z.rows() != c.z.rows() || grad_z.cols() != c.z.cols()) {
    throw DimensionError("gradient shape does not match projection output");
  }
  ModelParams g = ModelParams::ZerosLike(params);

  // Through z = head / |head|: d head = (dz - z (z . dz)) / |head|.
  Matrix d_head(c.head.rows(), c.head.cols());
  for (Eigen::Index i = 0; i < c.head.rows(); ++i) {
    if (c.head_norm[i] > 0.0) {
      const double proj = c.z.row(i).dot(grad_z.row(i));
      d_head.row(i) = (grad_z.row(i) - proj * c.z.row(i)) / c.head_norm[i];
    } else {
      d_head.row(i).setZero();
    }
  }
  g.head_w.noalias() = d_head.transpose() * c.h;
  g.head_b = d_head.colwise().sum().transpose();
  BackwardEncoder(params, c, d_head * params.head_w, g);
  return g;
}

ModelParams BackwardFromEncoderOutput(const ModelParams& params, const ForwardCache& cache, const Matrix& grad_h) {
  if (grad_h.rows() != cache.h.rows() || grad_h.cols() != cache.h.cols()) {
    throw DimensionError("gradient shape does not match encoder output");
  }
  ModelParams g = ModelParams::ZerosLike(params);
  BackwardEncoder(params, cache, grad_h, g);
  return g;
}

}  // namespace botcon
