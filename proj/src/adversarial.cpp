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
#include "botcon/adversarial.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace botcon {

FeatureGrid FeatureGrid::Range(std::string name, double lower, double upper, double step) {
  if (!(step > 0.0) || !std::isfinite(lower) || !std::isfinite(upper) || upper < lower) {
    throw ConfigError("grid range for " + name + " needs finite lower <= upper and step > 0", "attack.grids");
  }
  FeatureGrid g;
  g.feature_name = std::move(name);
  g.lower = lower;
  g.upper = upper;
  // Integer stepping avoids accumulated rounding in the grid values.
  for (int64_t k = 0;; ++k) {
    const double v = lower + static_cast<double>(k) * step;
    if (v > upper + 1e-9 * std::max(1.0, std::abs(upper))) break;
    g.values.push_back(std::min(v, upper));
  }
  if (g.values.back() < upper) g.values.push_back(upper);
  return g;
}

void FeatureGrid::Validate() const {
  const std::string field = "attack.grids." + feature_name;
  if (feature_name.empty()) throw ConfigError("grid feature name is empty", "attack.grids");
  if (values.empty()) throw ConfigError("grid for " + feature_name + " is empty", field);
  for (size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw ConfigError("grid for " + feature_name + " has a non-finite value", field);
    if (values[i] < lower || values[i] > upper) {
      throw ConfigError("grid value for " + feature_name + " outside [" + std::to_string(lower) + ", " +
                            std::to_string(upper) + "]",
                        field);
    }
    if (i > 0 && !(values[i] > values[i - 1])) {
      throw ConfigError("grid for " + feature_name + " must be strictly ascending", field);
    }
  }
}

std::string_view ToString(AttackGroup g) {
  switch (g) {
    case AttackGroup::kUserMeta: return "user_meta";
    case AttackGroup::kTweetMeta: return "tweet_meta";
    case AttackGroup::kTemporal: return "temporal";
    case AttackGroup::kAll: return "all";
  }
  return "unknown";
}

AttackGroup ParseAttackGroup(std::string_view s) {
  if (s == "user_meta") return AttackGroup::kUserMeta;
  if (s == "tweet_meta") return AttackGroup::kTweetMeta;
  if (s == "temporal") return AttackGroup::kTemporal;
  if (s == "all") return AttackGroup::kAll;
  throw ConfigError("unknown attack group '" + std::string(s) + "'", "attack.group");
}

AttackSpec AttackSpec::Default(AttackGroup group) {
  AttackSpec spec;
  spec.group = group;
  auto& g = spec.grids;
  switch (group) {
    case AttackGroup::kUserMeta:
      g.push_back(FeatureGrid::Range("followers_count", 0, 1000, 50));
      g.push_back(FeatureGrid::Range("friends_count", 0, 1000, 50));
      break;
    case AttackGroup::kTweetMeta:
      g.push_back(FeatureGrid::Range("mean_no_words", 1, 55, 5));
      g.push_back(FeatureGrid::Range("mean_favourites_per_tweet", 0, 1000, 50));
      g.push_back(FeatureGrid::Range("mean_retweets_per_tweet", 0, 200, 10));
      break;
    case AttackGroup::kTemporal:
      g.push_back(FeatureGrid::Range("max_tweets_per_hour", 0, 100, 5));
      g.push_back(FeatureGrid::Range("max_tweets_per_day", 0, 200, 10));
      break;
    case AttackGroup::kAll:
      // 6 * 6 * 7 * 6 * 6 * 6 * 6 = 326592 candidates.
      g.push_back(FeatureGrid::Range("followers_count", 0, 1000, 200));
      g.push_back(FeatureGrid::Range("friends_count", 0, 1000, 200));
      g.push_back(FeatureGrid::Range("mean_no_words", 1, 55, 9));
      g.push_back(FeatureGrid::Range("mean_favourites_per_tweet", 0, 1000, 200));
      g.push_back(FeatureGrid::Range("mean_retweets_per_tweet", 0, 200, 40));
      g.push_back(FeatureGrid::Range("max_tweets_per_hour", 0, 100, 20));
      g.push_back(FeatureGrid::Range("max_tweets_per_day", 0, 200, 40));
      break;
  }
  return spec;
}

uint64_t AttackSpec::ProductSize() const {
  if (grids.empty()) return 0;
  uint64_t n = 1;
  for (const auto& g : grids) {
    const auto k = static_cast<uint64_t>(g.values.size());
    if (k != 0 && n > std::numeric_limits<uint64_t>::max() / k) return std::numeric_limits<uint64_t>::max();
    n *= k;
  }
  return n;
}

void AttackSpec::Validate(const FeatureSchema& schema) const {
  if (max_queries_per_sample == 0) {
    throw ConfigError("max_queries_per_sample must be positive", "attack.max_queries_per_sample");
  }
  std::set<std::string> seen;
  for (const auto& g : grids) {
    g.Validate();
    const auto col = schema.column_index(g.feature_name);
    if (!col) throw ConfigError("grid feature '" + g.feature_name + "' is not a schema column", "attack.grids");
    const ColumnSpan emb = schema.span(Category::kTweetText);
    if (*col >= emb.offset && *col < emb.offset + emb.size) {
      throw ConfigError("grid feature '" + g.feature_name + "' is an embedding coordinate", "attack.grids");
    }
    if (!seen.insert(g.feature_name).second) {
      throw ConfigError("duplicate grid for '" + g.feature_name + "'", "attack.grids");
    }
  }
  const uint64_t product = ProductSize();
  if (product > max_queries_per_sample) {
    throw ConfigError("grid product " + std::to_string(product) + " exceeds max_queries_per_sample " +
                          std::to_string(max_queries_per_sample) + "; use coarser grids",
                      "attack.grids");
  }
}

PerturbationEnumerator::PerturbationEnumerator(const AttackSpec& spec, const FeatureSchema& schema,
                                               const Eigen::Ref<const Vector>& sample)
    : sample_(sample) {
  spec.Validate(schema);
  if (static_cast<size_t>(sample.size()) != schema.width()) throw DimensionError("sample width does not match schema");
  for (const auto& g : spec.grids) {
    grids_.push_back(g.values);
    columns_.push_back(*schema.column_index(g.feature_name));
  }
  digits_.assign(grids_.size(), 0);
  done_ = grids_.empty();
}

bool PerturbationEnumerator::Next(Vector& out) {
  while (!done_) {
    bool identical = true;
    out = sample_;
    for (size_t k = 0; k < grids_.size(); ++k) {
      const double v = grids_[k][digits_[k]];
      identical = identical && v == sample_[static_cast<Eigen::Index>(columns_[k])];
      out[static_cast<Eigen::Index>(columns_[k])] = v;
    }
    ++position_;
    // Odometer increment, last grid fastest.
    size_t k = grids_.size();
    while (k > 0) {
      --k;
      if (++digits_[k] < grids_[k].size()) break;
      digits_[k] = 0;
      if (k == 0) done_ = true;
    }
    if (!identical) return true;
  }
  return false;
}

std::vector<Vector> EnumeratePerturbations(const AttackSpec& spec, const FeatureSchema& schema,
                                           const Eigen::Ref<const Vector>& sample) {
  PerturbationEnumerator e(spec, schema, sample);
  std::vector<Vector> out;
  Vector row;
  while (e.Next(row)) out.push_back(row);
  return out;
}

AttackOutcome AttackSample(const BlackBoxClassifier& classifier, const FeatureSchema& schema,
                           const Eigen::Ref<const Vector>& sample, const AttackSpec& spec) {
  AttackOutcome outcome;
  PerturbationEnumerator e(spec, schema, sample);
  if (classifier.Predict(sample) != 1) return outcome;
  outcome.attackable = true;
  Vector candidate;
  while (e.Next(candidate)) {
    ++outcome.queries;
    if (classifier.Predict(candidate) == 0) {
      outcome.success = true;
      outcome.candidate_index = e.position();
      outcome.perturbed = std::move(candidate);
      break;
    }
  }
  return outcome;
}

AttackReport AttackCampaign(const BlackBoxClassifier& classifier, const Dataset& samples, const AttackSpec& spec) {
  spec.Validate(samples.schema);
  const auto start = std::chrono::steady_clock::now();
  AttackReport report;
  report.group = spec.group;
  report.initial_samples = samples.size();
  report.queries.assign(samples.size(), 0);
  for (size_t i = 0; i < samples.size(); ++i) {
    const auto row = samples.rows.row(static_cast<Eigen::Index>(i)).transpose();
    AttackOutcome o = AttackSample(classifier, samples.schema, row, spec);
    report.queries[i] = o.queries;
    report.total_queries += o.queries;
    if (!o.attackable) continue;
    ++report.attackable;
    if (!o.success) continue;
    // Witness check: the stored row must still read as human.
    if (classifier.Predict(*o.perturbed) != 0) throw Error("attack witness failed re-verification");
    ++report.successes;
    PerturbationRecord rec;
    rec.sample_index = i;
    rec.id = i < samples.ids.size() ? samples.ids[i] : std::to_string(i);
    rec.candidate_index = o.candidate_index;
    for (const auto& g : spec.grids) {
      const auto col = static_cast<Eigen::Index>(*samples.schema.column_index(g.feature_name));
      rec.changes.emplace_back(g.feature_name, (*o.perturbed)[col]);
    }
    rec.perturbed = std::move(*o.perturbed);
    report.records.push_back(std::move(rec));
  }
  report.success_rate = report.initial_samples > 0
                            ? static_cast<double>(report.successes) / static_cast<double>(report.initial_samples)
                            : 0.0;
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

nlohmann::ordered_json ToJson(const AttackReport& report, const AttackSpec& spec, bool normalized) {
  nlohmann::ordered_json j;
  j["group"] = std::string(ToString(report.group));
  j["initial_samples"] = report.initial_samples;
  j["attackable"] = report.attackable;
  j["successes"] = report.successes;
  j["success_rate"] = report.success_rate;
  j["total_queries"] = report.total_queries;
  j["queries"] = report.queries;
  if (!normalized) j["wall_seconds"] = report.wall_seconds;
  nlohmann::ordered_json grids = nlohmann::ordered_json::array();
  for (const auto& g : spec.grids) {
    grids.push_back({{"feature", g.feature_name}, {"lower", g.lower}, {"upper", g.upper}, {"values", g.values}});
  }
  j["grids"] = std::move(grids);
  j["max_queries_per_sample"] = spec.max_queries_per_sample;
  nlohmann::ordered_json recs = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    nlohmann::ordered_json changes = nlohmann::ordered_json::object();
    for (const auto& [name, v] : r.changes) changes[name] = v;
    recs.push_back({{"sample_index", r.sample_index},
                    {"id", r.id},
                    {"candidate_index", r.candidate_index},
                    {"changes", std::move(changes)},
                    {"perturbed_row", std::vector<double>(r.perturbed.data(), r.perturbed.data() + r.perturbed.size())}});
  }
  j["successful_perturbations"] = std::move(recs);
  return j;
}

Dataset SelectCampaignSamples(const BlackBoxClassifier& classifier, const Dataset& pool, size_t per_class,
                              uint64_t seed) {
  std::vector<size_t> order(pool.size());
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(SubstreamSeed(seed, 0x61747463));
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<size_t> bots, humans;
  for (size_t i : order) {
    if (bots.size() == per_class && humans.size() == per_class) break;
    const int p = classifier.Predict(pool.rows.row(static_cast<Eigen::Index>(i)).transpose());
    auto& bucket = p == 1 ? bots : humans;
    if (bucket.size() < per_class) bucket.push_back(i);
  }
  if (bots.size() < per_class || humans.size() < per_class) {
    throw DataError("pool has " + std::to_string(bots.size()) + " bot-predicted and " +
                    std::to_string(humans.size()) + " human-predicted rows; need " + std::to_string(per_class) +
                    " of each");
  }
  std::vector<size_t> picked = bots;
  picked.insert(picked.end(), humans.begin(), humans.end());
  return pool.Subset(picked);
}

}  // namespace botcon
