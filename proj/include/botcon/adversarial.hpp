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
#ifndef BOTCON_ADVERSARIAL_HPP_
#define BOTCON_ADVERSARIAL_HPP_

#include <atomic>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "botcon/dataset.hpp"
#include "botcon/evaluation.hpp"

namespace botcon {

// Candidate raw values for one perturbable feature.
struct FeatureGrid {
  std::string feature_name;
  std::vector<double> values;  // ascending, within [lower, upper]
  double lower = 0.0;
  double upper = 0.0;

  // lower, lower + step, ... and `upper` itself if the steps miss it.
  static FeatureGrid Range(std::string name, double lower, double upper, double step);
  void Validate() const;
};

enum class AttackGroup { kUserMeta, kTweetMeta, kTemporal, kAll };

std::string_view ToString(AttackGroup g);
AttackGroup ParseAttackGroup(std::string_view s);

inline constexpr uint64_t kDefaultQueryBudget = 1'000'000;

struct AttackSpec {
  AttackGroup group = AttackGroup::kTemporal;
  std::vector<FeatureGrid> grids;
  uint64_t max_queries_per_sample = kDefaultQueryBudget;
  uint64_t seed = 0;

  // Grids over followers/friends, mean words/favourites/retweets and max
  // tweets per hour/day. The all-features group uses coarser steps so its
  // product stays under the default query budget.
  static AttackSpec Default(AttackGroup group);

  // Throws ConfigError for unknown columns, duplicate features, invalid grids
  // or a Cartesian product above max_queries_per_sample.
  void Validate(const FeatureSchema& schema) const;
  // Saturates at UINT64_MAX.
  uint64_t ProductSize() const;
};

// The attack only ever sees this interface.
class BlackBoxClassifier {
 public:
  virtual ~BlackBoxClassifier() = default;
  // 1 = bot, 0 = human. Takes a raw (unnormalized) row.
  virtual int Predict(const Eigen::Ref<const Vector>& raw_row) const = 0;
};

class PipelineClassifier : public BlackBoxClassifier {
 public:
  explicit PipelineClassifier(const Pipeline& pipeline) : pipeline_(pipeline) {}
  int Predict(const Eigen::Ref<const Vector>& raw_row) const override { return pipeline_.Predict(raw_row).label; }

 private:
  const Pipeline& pipeline_;
};

// Wraps another classifier and counts predict() calls.
class CountingClassifier : public BlackBoxClassifier {
 public:
  explicit CountingClassifier(const BlackBoxClassifier& inner) : inner_(inner) {}
  int Predict(const Eigen::Ref<const Vector>& raw_row) const override {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return inner_.Predict(raw_row);
  }
  uint64_t calls() const { return calls_.load(); }

 private:
  const BlackBoxClassifier& inner_;
  mutable std::atomic<uint64_t> calls_{0};
};

// Lazy lexicographic walk of the grid product (first grid most significant).
// Candidates identical to the original row are skipped. Keeps its own copy of
// the grids, so the spec may be a temporary.
class PerturbationEnumerator {
 public:
  PerturbationEnumerator(const AttackSpec& spec, const FeatureSchema& schema, const Eigen::Ref<const Vector>& sample);

  // Writes the next candidate into `out`; false when exhausted.
  bool Next(Vector& out);
  // Zero-based position in the full product of the last candidate returned.
  uint64_t position() const { return position_ - 1; }

 private:
  std::vector<std::vector<double>> grids_;
  std::vector<size_t> columns_;
  std::vector<size_t> digits_;
  Vector sample_;
  uint64_t position_ = 0;
  bool done_ = false;
};

std::vector<Vector> EnumeratePerturbations(const AttackSpec& spec, const FeatureSchema& schema,
                                           const Eigen::Ref<const Vector>& sample);

struct AttackOutcome {
  bool attackable = false;  // predicted bot before any perturbation
  bool success = false;
  uint64_t queries = 0;     // candidate queries, excluding the initial check
  uint64_t candidate_index = 0;
  std::optional<Vector> perturbed;
};

AttackOutcome AttackSample(const BlackBoxClassifier& classifier, const FeatureSchema& schema,
                           const Eigen::Ref<const Vector>& sample, const AttackSpec& spec);

struct PerturbationRecord {
  size_t sample_index = 0;
  std::string id;
  uint64_t candidate_index = 0;
  std::vector<std::pair<std::string, double>> changes;  // grid features only
  Vector perturbed;
};

struct AttackReport {
  AttackGroup group = AttackGroup::kTemporal;
  uint64_t initial_samples = 0;
  uint64_t attackable = 0;
  uint64_t successes = 0;
  double success_rate = 0.0;  // successes / initial_samples
  std::vector<uint64_t> queries;  // per sample, 0 for non-attackable ones
  uint64_t total_queries = 0;
  double wall_seconds = 0.0;
  std::vector<PerturbationRecord> records;
};

AttackReport AttackCampaign(const BlackBoxClassifier& classifier, const Dataset& samples, const AttackSpec& spec);

// `normalized` drops the wall-clock figure so reports can be compared byte for byte.
nlohmann::ordered_json ToJson(const AttackReport& report, const AttackSpec& spec, bool normalized);

// Seeded pick of `per_class` bot-predicted and `per_class` human-predicted rows.
Dataset SelectCampaignSamples(const BlackBoxClassifier& classifier, const Dataset& pool, size_t per_class,
                              uint64_t seed);

}  // namespace botcon

#endif  // BOTCON_ADVERSARIAL_HPP_
