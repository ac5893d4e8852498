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
#include "botcon/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "botcon/representation.hpp"

namespace botcon {
namespace {

const std::vector<std::string>& DefaultUserMetaNames() {
  static const std::vector<std::string> names = {
      "followers_count",         "friends_count",          "listed_count",
      "verified",                "user_age",               "follower_growth_rate",
      "friends_growth_rate",     "listed_growth_rate",     "followers_friend_ratio",
      "name_length",             "username_length",        "description_length",
      "num_digits_in_name",      "num_digits_in_username", "names_ratio",
      "name_freq",               "name_entropy",           "username_entropy",
      "description_entropy",     "description_sentiment",  "names_sim",
      "url_in_description",      "bot_in_names",           "hashtag_in_description",
      "hashtag_in_name",         "numbers_in_description", "numbers_in_name",
      "numbers_in_username",     "emojis_in_description",  "emojis_in_name",
      "favourites_count",        "status_count",           "default_profile"};
  return names;
}

const std::vector<std::string>& DefaultTweetMetaNames() {
  static const std::vector<std::string> names = {
      "mean_no_emoticons",
      "mean_no_urls_per_tweet",
      "mean_no_media_per_tweet",
      "mean_no_words",
      "no_languages",
      "mean_no_hashtags",
      "mean_number_of_positive_emoticons_per_tweet",
      "mean_number_of_negative_emoticons_per_tweet",
      "mean_number_of_neutral_emoticons_per_tweet",
      "mean_tweet_sentiment",
      "mean_positive_valence_score_per_tweet",
      "mean_negative_valence_score_per_tweet",
      "mean_neutral_valence_score_per_tweet",
      "positive_valence_score_of_aggregated_tweets",
      "negative_valence_score_of_aggregated_tweets",
      "neutral_valence_score_of_aggregated_tweets",
      "mean_positive_and_negative_score_ratio_per_tweet",
      "mean_emoticons_entropy_per_tweet",
      "mean_emoticons_entropy_of_aggregated_tweets",
      "mean_negative_emoticons_entropy_of_aggregated_tweets",
      "mean_positive_emoticons_entropy_of_aggregated_tweets",
      "mean_neutral_emoticons_entropy_of_aggregated_tweets",
      "mean_positive_emoticons_entropy_per_tweet",
      "mean_negative_emoticons_entropy_per_tweet",
      "mean_neutral_emoticons_entropy_per_tweet",
      "mean_favourites_per_tweet",
      "mean_retweets_per_tweet",
      "no_retweet_tweets",
      "retweet_as_tweet_rate"};
  return names;
}

const std::vector<std::string>& DefaultTemporalNames() {
  static const std::vector<std::string> names = {
      "time_between_tweets", "tweet_frequency",   "min_tweets_per_hour",
      "min_tweets_per_day",  "max_tweets_per_hour", "max_tweets_per_day",
      "max_occurence_of_same_gap"};
  return names;
}

std::string EmbeddingName(size_t i) { return "embedding_" + std::to_string(i); }

std::string FormatDouble(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string_view> SplitCsvLine(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double ParseDouble(std::string_view field, size_t line_no, size_t col, const std::string& column_name) {
  double v = 0.0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw ParseError("line " + std::to_string(line_no) + ", column " + std::to_string(col) + " (" +
                     column_name + "): cannot parse '" + std::string(field) + "' as a number");
  }
  if (!std::isfinite(v)) {
    throw ParseError("line " + std::to_string(line_no) + ", column " + std::to_string(col) + " (" +
                     column_name + "): non-finite value");
  }
  return v;
}

void StripCarriageReturn(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::string_view CategoryName(Category c) {
  switch (c) {
    case Category::kUserMeta:
      return "user_meta";
    case Category::kTweetText:
      return "tweet_text";
    case Category::kTweetMeta:
      return "tweet_meta";
    case Category::kTemporal:
      return "temporal";
  }
  return "unknown";
}

FeatureSchema FeatureSchema::Default(size_t embedding_dim) {
  FeatureSchema s;
  s.user_meta_names = DefaultUserMetaNames();
  s.embedding_dim = embedding_dim;
  s.tweet_meta_names = DefaultTweetMetaNames();
  s.temporal_names = DefaultTemporalNames();
  return s;
}

void FeatureSchema::Validate() const {
  if (user_meta_names.empty()) throw ConfigError("schema: user_meta is empty", "schema.user_meta");
  if (embedding_dim == 0) throw ConfigError("schema: embedding_dim must be positive", "schema.embedding_dim");
  if (tweet_meta_names.empty()) throw ConfigError("schema: tweet_meta is empty", "schema.tweet_meta");
  if (temporal_names.empty()) throw ConfigError("schema: temporal is empty", "schema.temporal");
  std::set<std::string> seen;
  for (const auto& name : column_names()) {
    if (name.empty()) throw ConfigError("schema: empty feature name", "schema");
    if (name == "id" || name == "label") {
      throw ConfigError("schema: reserved feature name '" + name + "'", "schema");
    }
    if (!seen.insert(name).second) throw ConfigError("schema: duplicate feature name '" + name + "'", "schema");
  }
}

size_t FeatureSchema::width() const {
  return user_meta_names.size() + embedding_dim + tweet_meta_names.size() + temporal_names.size();
}

ColumnSpan FeatureSchema::span(Category c) const {
  const size_t um = user_meta_names.size();
  const size_t tm = tweet_meta_names.size();
  switch (c) {
    case Category::kUserMeta:
      return {0, um};
    case Category::kTweetText:
      return {um, embedding_dim};
    case Category::kTweetMeta:
      return {um + embedding_dim, tm};
    case Category::kTemporal:
      return {um + embedding_dim + tm, temporal_names.size()};
  }
  return {};
}

std::vector<std::string> FeatureSchema::column_names() const {
  std::vector<std::string> names;
  names.reserve(width());
  names.insert(names.end(), user_meta_names.begin(), user_meta_names.end());
  for (size_t i = 0; i < embedding_dim; ++i) names.push_back(EmbeddingName(i));
  names.insert(names.end(), tweet_meta_names.begin(), tweet_meta_names.end());
  names.insert(names.end(), temporal_names.begin(), temporal_names.end());
  return names;
}

std::optional<size_t> FeatureSchema::column_index(std::string_view name) const {
  auto find_in = [&](const std::vector<std::string>& v, size_t offset) -> std::optional<size_t> {
    auto it = std::find(v.begin(), v.end(), name);
    if (it == v.end()) return std::nullopt;
    return offset + static_cast<size_t>(it - v.begin());
  };
  if (auto i = find_in(user_meta_names, span(Category::kUserMeta).offset)) return i;
  if (auto i = find_in(tweet_meta_names, span(Category::kTweetMeta).offset)) return i;
  if (auto i = find_in(temporal_names, span(Category::kTemporal).offset)) return i;
  constexpr std::string_view prefix = "embedding_";
  if (name.starts_with(prefix)) {
    size_t idx = 0;
    auto tail = name.substr(prefix.size());
    auto res = std::from_chars(tail.data(), tail.data() + tail.size(), idx);
    if (res.ec == std::errc() && res.ptr == tail.data() + tail.size() && idx < embedding_dim) {
      return span(Category::kTweetText).offset + idx;
    }
  }
  return std::nullopt;
}

uint64_t FeatureSchema::hash() const {
  Fnv1a h;
  for (const auto& n : user_meta_names) h.Update(n);
  h.UpdateValue(static_cast<uint64_t>(embedding_dim));
  for (const auto& n : tweet_meta_names) h.Update(n);
  for (const auto& n : temporal_names) h.Update(n);
  return h.digest();
}

void Dataset::Validate() const {
  schema.Validate();
  if (static_cast<size_t>(rows.cols()) != schema.width()) {
    throw DimensionError("dataset has " + std::to_string(rows.cols()) + " columns, schema expects " +
                         std::to_string(schema.width()));
  }
  if (!rows.allFinite()) throw DataError("dataset contains NaN or Inf values");
  if (ids.size() != size()) throw DataError("dataset id count does not match row count");
  if (labels) {
    if (labels->size() != size()) throw DataError("dataset label count does not match row count");
    for (size_t i = 0; i < labels->size(); ++i) {
      if ((*labels)[i] != 0 && (*labels)[i] != 1) {
        throw DataError("non-binary label for id '" + ids[i] + "'");
      }
    }
  }
}

Dataset Dataset::Subset(std::span<const size_t> indices) const {
  Dataset out;
  out.schema = schema;
  out.rows.resize(static_cast<Eigen::Index>(indices.size()), rows.cols());
  out.ids.reserve(indices.size());
  if (labels) out.labels.emplace().reserve(indices.size());
  for (size_t k = 0; k < indices.size(); ++k) {
    const size_t i = indices[k];
    out.rows.row(static_cast<Eigen::Index>(k)) = rows.row(static_cast<Eigen::Index>(i));
    out.ids.push_back(ids[i]);
    if (labels) out.labels->push_back((*labels)[i]);
  }
  return out;
}

const std::vector<int>& Dataset::RequireLabels() const {
  if (!labels) throw ConfigError("dataset has no labels", "labels");
  return *labels;
}

NormStats FitNormalizer(const Dataset& train) {
  if (train.size() < 2) throw ConfigError("normalizer needs at least 2 rows", "data");
  const auto& schema = train.schema;
  const ColumnSpan emb = schema.span(Category::kTweetText);

  NormStats stats;
  stats.schema_hash = schema.hash();
  stats.width = schema.width();
  for (size_t j = 0; j < stats.width; ++j) {
    if (j >= emb.offset && j < emb.offset + emb.size) continue;
    stats.columns.push_back(j);
  }
  const auto n = static_cast<double>(train.size());
  stats.means.resize(static_cast<Eigen::Index>(stats.columns.size()));
  stats.stds.resize(static_cast<Eigen::Index>(stats.columns.size()));
  for (size_t k = 0; k < stats.columns.size(); ++k) {
    auto col = train.rows.col(static_cast<Eigen::Index>(stats.columns[k]));
    const double mean = col.sum() / n;
    const double var = (col.array() - mean).square().sum() / n;
    double sd = std::sqrt(var);
    if (sd < kZeroVarianceThreshold) sd = 1.0;
    stats.means[static_cast<Eigen::Index>(k)] = mean;
    stats.stds[static_cast<Eigen::Index>(k)] = sd;
  }
  return stats;
}

void NormalizeRow(const NormStats& stats, Eigen::Ref<Vector> row) {
  if (static_cast<size_t>(row.size()) != stats.width) {
    throw DimensionError("row width " + std::to_string(row.size()) + " does not match normalizer width " +
                         std::to_string(stats.width));
  }
  for (size_t k = 0; k < stats.columns.size(); ++k) {
    const auto j = static_cast<Eigen::Index>(stats.columns[k]);
    const auto kk = static_cast<Eigen::Index>(k);
    row[j] = (row[j] - stats.means[kk]) / stats.stds[kk];
  }
}

Dataset ApplyNormalizer(const NormStats& stats, const Dataset& ds) {
  if (ds.schema.hash() != stats.schema_hash || ds.schema.width() != stats.width) {
    throw ConfigError("dataset schema does not match the schema the normalizer was fit on", "schema");
  }
  Dataset out = ds;
  for (size_t k = 0; k < stats.columns.size(); ++k) {
    const auto j = static_cast<Eigen::Index>(stats.columns[k]);
    const auto kk = static_cast<Eigen::Index>(k);
    out.rows.col(j) = (out.rows.col(j).array() - stats.means[kk]) / stats.stds[kk];
  }
  return out;
}

std::pair<Dataset, Dataset> SplitDataset(const Dataset& ds, double test_fraction, uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test_fraction must lie strictly between 0 and 1", "data.test_fraction");
  }
  const auto& labels = ds.RequireLabels();
  std::array<std::vector<size_t>, 2> by_class;
  for (size_t i = 0; i < labels.size(); ++i) by_class[static_cast<size_t>(labels[i])].push_back(i);

  Rng rng(MixSeed(seed));
  std::vector<size_t> train_idx, test_idx;
  for (int c = 0; c < 2; ++c) {
    auto& members = by_class[static_cast<size_t>(c)];
    if (members.size() < 2) {
      throw ConfigError("class " + std::to_string(c) + " has fewer than 2 members; cannot stratify", "data");
    }
    std::shuffle(members.begin(), members.end(), rng);
    auto n_test = static_cast<size_t>(std::floor(test_fraction * static_cast<double>(members.size()) + 0.5));
    n_test = std::clamp<size_t>(n_test, 1, members.size() - 1);
    test_idx.insert(test_idx.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_test));
    train_idx.insert(train_idx.end(), members.begin() + static_cast<std::ptrdiff_t>(n_test), members.end());
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {ds.Subset(train_idx), ds.Subset(test_idx)};
}

void SyntheticConfig::Validate() const {
  schema.Validate();
  if (n_per_class < 2) throw ConfigError("synthetic.n_per_class must be at least 2", "synthetic.n_per_class");
  if (!(class_separation >= 0.0) || !std::isfinite(class_separation)) {
    throw ConfigError("synthetic.class_separation must be nonnegative", "synthetic.class_separation");
  }
  if (!std::isfinite(marginal_shift)) throw ConfigError("synthetic.marginal_shift must be finite", "synthetic.marginal_shift");
  if (!(covariance_mix >= 0.0) || !std::isfinite(covariance_mix)) {
    throw ConfigError("synthetic.covariance_mix must be nonnegative", "synthetic.covariance_mix");
  }
}

Dataset GenerateSynthetic(const SyntheticConfig& cfg) {
  cfg.Validate();
  const size_t width = cfg.schema.width();
  const auto w = static_cast<Eigen::Index>(width);
  const ColumnSpan emb = cfg.schema.span(Category::kTweetText);

  // Shared class geometry.
  Rng geo(SubstreamSeed(cfg.structure_seed, 0x67656f));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector base(w), scale(w), direction(w);
  for (Eigen::Index j = 0; j < w; ++j) {
    const bool is_emb = static_cast<size_t>(j) >= emb.offset && static_cast<size_t>(j) < emb.offset + emb.size;
    if (is_emb) {
      scale[j] = 0.1 * std::exp(unit(geo) - 0.5);
      base[j] = 0.05 * normal(geo);
    } else {
      // Count-like columns with scales spanning a few orders of magnitude.
      scale[j] = std::exp(std::log(0.5) + unit(geo) * (std::log(200.0) - std::log(0.5)));
      base[j] = scale[j] * (1.0 + 3.0 * unit(geo));
    }
  }
  for (Eigen::Index j = 0; j < w; ++j) direction[j] = normal(geo);
  direction.normalize();

  // Dataset-specific nuisance: marginal shift signs and covariance remix.
  Rng own(SubstreamSeed(cfg.seed, 0x6f776e));
  Vector shift(w);
  for (Eigen::Index j = 0; j < w; ++j) shift[j] = (unit(own) < 0.5 ? -1.0 : 1.0) * cfg.marginal_shift * scale[j];
  Matrix mix;
  if (cfg.covariance_mix > 0.0) {
    mix = Matrix::Identity(w, w);
    const double sd = cfg.covariance_mix / std::sqrt(static_cast<double>(width));
    for (Eigen::Index i = 0; i < w; ++i)
      for (Eigen::Index j = 0; j < w; ++j) mix(i, j) += sd * normal(own);
    // Unit row norms keep every column's within-class variance at scale^2.
    for (Eigen::Index i = 0; i < w; ++i) mix.row(i).normalize();
  }

  const size_t n = 2 * cfg.n_per_class;
  Dataset ds;
  ds.schema = cfg.schema;
  ds.rows.resize(static_cast<Eigen::Index>(n), w);
  ds.labels.emplace(n);
  ds.ids.reserve(n);
  Rng sampler(SubstreamSeed(cfg.seed, 0x73616d));
  Vector eps(w);
  for (size_t i = 0; i < n; ++i) {
    const int label = i < cfg.n_per_class ? 0 : 1;
    const double sign = label == 1 ? 0.5 : -0.5;
    for (Eigen::Index j = 0; j < w; ++j) eps[j] = normal(sampler);
    if (mix.size() > 0) eps = mix * eps;
    ds.rows.row(static_cast<Eigen::Index>(i)) =
        (base + shift + sign * cfg.class_separation * scale.cwiseProduct(direction) + scale.cwiseProduct(eps))
            .transpose();
    (*ds.labels)[i] = label;
    ds.ids.push_back("s" + std::to_string(cfg.seed) + "_" + std::to_string(i));
  }
  return ds;
}

nlohmann::ordered_json SchemaToJson(const FeatureSchema& schema) {
  nlohmann::ordered_json j;
  j["user_meta"] = schema.user_meta_names;
  j["embedding_dim"] = schema.embedding_dim;
  j["tweet_meta"] = schema.tweet_meta_names;
  j["temporal"] = schema.temporal_names;
  return j;
}

FeatureSchema SchemaFromJson(const nlohmann::json& j) {
  FeatureSchema schema;
  schema.user_meta_names = j.at("user_meta").get<std::vector<std::string>>();
  schema.embedding_dim = j.at("embedding_dim").get<size_t>();
  schema.tweet_meta_names = j.at("tweet_meta").get<std::vector<std::string>>();
  schema.temporal_names = j.at("temporal").get<std::vector<std::string>>();
  return schema;
}

std::filesystem::path SchemaSidecarPath(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".schema.json");
  return p;
}

void SaveDataset(const Dataset& ds, const std::filesystem::path& csv_path) {
  ds.Validate();
  for (const auto& id : ds.ids) {
    if (id.empty() || id.find_first_of(",\"\n\r") != std::string::npos) {
      throw DataError("account id '" + id + "' is empty or contains CSV metacharacters");
    }
  }
  if (csv_path.has_parent_path()) std::filesystem::create_directories(csv_path.parent_path());
  const nlohmann::ordered_json schema_json = SchemaToJson(ds.schema);
  {
    std::ofstream js(SchemaSidecarPath(csv_path));
    if (!js) throw DataError("cannot write " + SchemaSidecarPath(csv_path).string());
    js << schema_json.dump(2) << "\n";
  }

  std::ofstream out(csv_path);
  if (!out) throw DataError("cannot write " + csv_path.string());
  out << "id";
  for (const auto& name : ds.schema.column_names()) out << ',' << name;
  if (ds.labels) out << ",label";
  out << '\n';
  for (size_t i = 0; i < ds.size(); ++i) {
    out << ds.ids[i];
    for (Eigen::Index j = 0; j < ds.rows.cols(); ++j) out << ',' << FormatDouble(ds.rows(static_cast<Eigen::Index>(i), j));
    if (ds.labels) out << ',' << (*ds.labels)[i];
    out << '\n';
  }
  if (!out) throw DataError("write failed for " + csv_path.string());
}

Dataset LoadDataset(const std::filesystem::path& csv_path) {
  const auto sidecar = SchemaSidecarPath(csv_path);
  std::ifstream js(sidecar);
  if (!js) throw ParseError("missing schema sidecar " + sidecar.string());
  FeatureSchema schema;
  try {
    schema = SchemaFromJson(nlohmann::json::parse(js));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(sidecar.string() + ": " + e.what());
  }
  schema.Validate();

  std::ifstream in(csv_path);
  if (!in) throw ParseError("cannot open " + csv_path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(csv_path.string() + ": empty file");
  StripCarriageReturn(line);
  const auto header = SplitCsvLine(line);
  const auto names = schema.column_names();
  const size_t width = names.size();
  bool has_label = false;
  if (header.size() == width + 2 && header.back() == "label") {
    has_label = true;
  } else if (header.size() != width + 1) {
    throw ParseError(csv_path.string() + ": header has " + std::to_string(header.size()) +
                     " columns, schema expects " + std::to_string(width + 1) + " or " + std::to_string(width + 2));
  }
  if (header.front() != "id") throw ParseError(csv_path.string() + ": first header column must be 'id'");
  for (size_t j = 0; j < width; ++j) {
    if (header[j + 1] != names[j]) {
      throw ParseError(csv_path.string() + ": header column " + std::to_string(j + 1) + " is '" +
                       std::string(header[j + 1]) + "', schema expects '" + names[j] + "'");
    }
  }

  std::vector<double> values;
  std::vector<int> labels;
  std::vector<std::string> ids;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    StripCarriageReturn(line);
    if (line.empty()) continue;
    const auto fields = SplitCsvLine(line);
    if (fields.size() != header.size()) {
      throw ParseError(csv_path.string() + ": row at line " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " columns, expected " + std::to_string(header.size()));
    }
    std::string id(fields[0]);
    for (size_t j = 0; j < width; ++j) values.push_back(ParseDouble(fields[j + 1], line_no, j + 1, names[j]));
    if (has_label) {
      const auto f = fields.back();
      if (f != "0" && f != "1") {
        throw ParseError(csv_path.string() + ": line " + std::to_string(line_no) + ": non-binary label '" +
                         std::string(f) + "' for id '" + id + "'");
      }
      labels.push_back(f == "1" ? 1 : 0);
    }
    ids.push_back(std::move(id));
  }

  Dataset ds;
  ds.schema = std::move(schema);
  ds.rows = Eigen::Map<const Matrix>(values.data(), static_cast<Eigen::Index>(ids.size()),
                                     static_cast<Eigen::Index>(width));
  if (has_label) ds.labels = std::move(labels);
  ds.ids = std::move(ids);
  ds.Validate();
  return ds;
}

void AttachTweetEmbeddings(Dataset& ds, const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw ParseError("cannot open " + csv_path.string());
  const size_t dim = ds.schema.embedding_dim;
  std::string line;
  if (!std::getline(in, line)) throw ParseError(csv_path.string() + ": empty file");
  StripCarriageReturn(line);
  if (SplitCsvLine(line).size() != dim + 1) {
    throw ParseError(csv_path.string() + ": header must hold id plus " + std::to_string(dim) + " embedding columns");
  }
  std::unordered_map<std::string, std::vector<Vector>> tweets;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    StripCarriageReturn(line);
    if (line.empty()) continue;
    const auto fields = SplitCsvLine(line);
    if (fields.size() != dim + 1) {
      throw ParseError(csv_path.string() + ": row at line " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " columns, expected " + std::to_string(dim + 1));
    }
    Vector v(static_cast<Eigen::Index>(dim));
    for (size_t j = 0; j < dim; ++j) v[static_cast<Eigen::Index>(j)] = ParseDouble(fields[j + 1], line_no, j + 1, EmbeddingName(j));
    tweets[std::string(fields[0])].push_back(std::move(v));
  }
  const ColumnSpan emb = ds.schema.span(Category::kTweetText);
  for (size_t i = 0; i < ds.size(); ++i) {
    auto it = tweets.find(ds.ids[i]);
    if (it == tweets.end()) throw DataError("account '" + ds.ids[i] + "' has no tweet embeddings");
    const Vector mean = AverageEmbeddings(it->second);
    ds.rows.row(static_cast<Eigen::Index>(i)).segment(static_cast<Eigen::Index>(emb.offset), static_cast<Eigen::Index>(dim)) =
        mean.transpose();
  }
}

}  // namespace botcon
