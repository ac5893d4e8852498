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
#ifndef BOTCON_MODEL_HPP_
#define BOTCON_MODEL_HPP_

#include <span>
#include <string_view>

#include "botcon/common.hpp"
#include "botcon/dataset.hpp"
#include "botcon/representation.hpp"

namespace botcon {

// Representation blocks -> encoder f (two ReLU layers of width d, the first
// reading the 4d-wide representation) -> projection head g (one linear layer)
// -> L2 normalization. The same struct doubles as the gradient container.
struct ModelParams {
  RepresentationParams rep;
  Matrix enc_w1;  // d x 4d
  Vector enc_b1;
  Matrix enc_w2;  // d x d
  Vector enc_b2;
  Matrix head_w;  // out_dim x d
  Vector head_b;

  static ModelParams Init(const FeatureSchema& schema, size_t d, size_t out_dim, uint64_t seed);
  static ModelParams ZerosLike(const ModelParams& like);

  size_t d() const { return rep.d; }
  size_t out_dim() const { return static_cast<size_t>(head_w.rows()); }
  size_t input_width() const { return rep.input_width(); }
  size_t parameter_count() const;

  // Visits the 14 trainable tensors in a fixed order:
  // 4 block weights, 4 block biases, enc_w1, enc_b1, enc_w2, enc_b2, head_w, head_b.
  template <typename F>
  void ForEachTensor(F&& f) {
    static constexpr std::string_view kBlockW[] = {"rep.user_meta.weight", "rep.tweet_text.weight",
                                                   "rep.tweet_meta.weight", "rep.temporal.weight"};
    static constexpr std::string_view kBlockB[] = {"rep.user_meta.bias", "rep.tweet_text.bias", "rep.tweet_meta.bias",
                                                   "rep.temporal.bias"};
    for (size_t k = 0; k < 4; ++k) f(kBlockW[k], Span(rep.blocks[k].weight));
    for (size_t k = 0; k < 4; ++k) f(kBlockB[k], Span(rep.blocks[k].bias));
    f(std::string_view("enc.w1"), Span(enc_w1));
    f(std::string_view("enc.b1"), Span(enc_b1));
    f(std::string_view("enc.w2"), Span(enc_w2));
    f(std::string_view("enc.b2"), Span(enc_b2));
    f(std::string_view("head.w"), Span(head_w));
    f(std::string_view("head.b"), Span(head_b));
  }
  template <typename F>
  void ForEachTensor(F&& f) const {
    const_cast<ModelParams*>(this)->ForEachTensor(
        [&](std::string_view name, std::span<double> s) { f(name, std::span<const double>(s.data(), s.size())); });
  }

  // FNV-1a over the raw bytes of every tensor, in ForEachTensor order.
  uint64_t Fingerprint() const;
  bool operator==(const ModelParams& other) const;

 private:
  template <typename T>
  static std::span<double> Span(T& t) {
    return {t.data(), static_cast<size_t>(t.size())};
  }
};

struct Encoded {
  Vector h;  // encoder output, width d
  Vector z;  // unit-norm projection, width out_dim
};

// Single-row path. Zero-norm head output maps to the first basis vector.
Encoded Encode(const ModelParams& params, const Eigen::Ref<const Vector>& normalized_row);

// Encoder output only, written into caller-owned buffers so repeated calls do
// not allocate. Skips the projection head.
struct EncodeScratch {
  Vector rep;
  Vector a1;
};
void EncodeHidden(const ModelParams& params, const Eigen::Ref<const Vector>& normalized_row, EncodeScratch& scratch,
                  Vector& h);

// Activations kept for the backward pass. One row per input row.
struct ForwardCache {
  Matrix input;
  Matrix rep;
  Matrix pre1;
  Matrix pre2;
  Matrix act1;
  Matrix h;
  Matrix head;
  Vector head_norm;
  Matrix z;
};

ForwardCache Forward(const ModelParams& params, const Matrix& rows);

// Encoder outputs h for every row; used by the linear probe.
Matrix EncodeBatch(const ModelParams& params, const Matrix& rows);

// Exact gradients of a scalar loss with respect to every tensor, given dL/dz.
ModelParams Backward(const ModelParams& params, const ForwardCache& cache, const Matrix& grad_z);

// Same for a loss of the encoder output h; head gradients are zero.
ModelParams BackwardFromEncoderOutput(const ModelParams& params, const ForwardCache& cache, const Matrix& grad_h);

}  // namespace botcon

#endif  // BOTCON_MODEL_HPP_
