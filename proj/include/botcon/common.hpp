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
#ifndef BOTCON_COMMON_HPP_
#define BOTCON_COMMON_HPP_

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>

namespace botcon {

// Rows are samples throughout the library.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

using Rng = std::mt19937_64;

// Error taxonomy. Everything derives from Error so callers that only care
// about "it failed" can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, std::string field = {})
      : Error(what), field_(std::move(field)) {}
  const char* kind() const noexcept override { return "config"; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "dimension"; }
};

class ParseError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "parse"; }
};

class DataError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "data"; }
};

// Raised when a loss is undefined for the given batch (e.g. an anchor with no
// positives or no negatives).
class DefinitionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "definition"; }
};

// SplitMix64 finalizer; used to derive independent substream seeds.
constexpr uint64_t MixSeed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr uint64_t SubstreamSeed(uint64_t base, uint64_t a, uint64_t b = 0) {
  return MixSeed(MixSeed(MixSeed(base) ^ a) ^ (b * 0x2545f4914f6cdd1dULL));
}

// FNV-1a over raw bytes.
class Fnv1a {
 public:
  void Update(const void* data, size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ULL;
    }
  }
  void Update(const std::string& s) {
    Update(s.data(), s.size());
    const unsigned char sep = 0xff;
    Update(&sep, 1);
  }
  template <typename T>
  void UpdateValue(const T& v) {
    Update(&v, sizeof(T));
  }
  uint64_t digest() const { return state_; }

 private:
  uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace botcon

#endif  // BOTCON_COMMON_HPP_
