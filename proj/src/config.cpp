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
#include "botcon/config.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#ifndef BOTCON_BUILD_ID
#define BOTCON_BUILD_ID "unknown"
#endif

namespace botcon {

std::string_view BuildId() { return BOTCON_BUILD_ID; }

uint64_t DerivedSeed(uint64_t global_seed, std::string_view stream) {
  Fnv1a h;
  h.Update(stream.data(), stream.size());
  return SubstreamSeed(global_seed, h.digest());
}

namespace {

std::string Join(const std::string& prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : prefix + "." + std::string(key);
}

// Reads typed keys from one TOML table and rejects anything left over.
class TableReader {
 public:
  TableReader(const toml::table* table, std::string prefix) : table_(table), prefix_(std::move(prefix)) {}

  bool Has(std::string_view key) const { return table_ && table_->contains(key); }

  void Get(std::string_view key, double& out) {
    const toml::node* n = Take(key);
    if (!n) return;
    if (auto v = n->value_exact<double>()) {
      out = *v;
    } else if (auto i = n->value_exact<int64_t>()) {
      out = static_cast<double>(*i);
    } else {
      throw ConfigError("expected a number", Join(prefix_, key));
    }
  }

  void Get(std::string_view key, int& out) {
    const int64_t v = Integer(key, std::numeric_limits<int>::min(), std::numeric_limits<int>::max(), out);
    out = static_cast<int>(v);
  }

  void Get(std::string_view key, size_t& out) {
    out = static_cast<size_t>(Integer(key, 0, std::numeric_limits<int64_t>::max(), static_cast<int64_t>(out)));
  }

  void Get(std::string_view key, bool& out) {
    const toml::node* n = Take(key);
    if (!n) return;
    auto v = n->value_exact<bool>();
    if (!v) throw ConfigError("expected a boolean", Join(prefix_, key));
    out = *v;
  }

  void Get(std::string_view key, std::string& out) {
    const toml::node* n = Take(key);
    if (!n) return;
    auto v = n->value_exact<std::string>();
    if (!v) throw ConfigError("expected a string", Join(prefix_, key));
    out = *v;
  }

  // Enum fields: `parse` maps the string, errors are re-tagged with the field path.
  template <typename E, typename Parse>
  void GetEnum(std::string_view key, E& out, Parse parse) {
    if (!Has(key)) return;
    std::string s;
    Get(key, s);
    try {
      out = parse(s);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), Join(prefix_, key));
    }
  }

  template <typename T>
  void GetList(std::string_view key, std::vector<T>& out) {
    const toml::node* n = Take(key);
    if (!n) return;
    const toml::array* arr = n->as_array();
    if (!arr) throw ConfigError("expected an array", Join(prefix_, key));
    std::vector<T> values;
    for (size_t i = 0; i < arr->size(); ++i) {
      const toml::node& e = (*arr)[i];
      const std::string field = Join(prefix_, key) + "[" + std::to_string(i) + "]";
      if constexpr (std::is_same_v<T, double>) {
        if (auto v = e.value_exact<double>()) {
          values.push_back(*v);
        } else if (auto iv = e.value_exact<int64_t>()) {
          values.push_back(static_cast<double>(*iv));
        } else {
          throw ConfigError("expected a number", field);
        }
      } else if constexpr (std::is_same_v<T, int>) {
        auto v = e.value_exact<int64_t>();
        if (!v || *v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max()) {
          throw ConfigError("expected an integer", field);
        }
        values.push_back(static_cast<int>(*v));
      } else {
        auto v = e.value_exact<std::string>();
        if (!v) throw ConfigError("expected a string", field);
        values.push_back(*v);
      }
    }
    out = std::move(values);
  }

  const toml::table* Sub(std::string_view key) {
    const toml::node* n = Take(key);
    if (!n) return nullptr;
    const toml::table* t = n->as_table();
    if (!t) throw ConfigError("expected a table", Join(prefix_, key));
    return t;
  }

  const toml::array* Array(std::string_view key) {
    const toml::node* n = Take(key);
    if (!n) return nullptr;
    const toml::array* a = n->as_array();
    if (!a) throw ConfigError("expected an array of tables", Join(prefix_, key));
    return a;
  }

  void Finish() const {
    if (!table_) return;
    for (const auto& [k, v] : *table_) {
      if (!used_.contains(std::string(k.str()))) throw ConfigError("unknown key", Join(prefix_, k.str()));
    }
  }

  const std::string& prefix() const { return prefix_; }

 private:
  const toml::node* Take(std::string_view key) {
    used_.insert(std::string(key));
    return table_ ? table_->get(key) : nullptr;
  }

  template <typename Current>
  int64_t Integer(std::string_view key, int64_t lo, int64_t hi, Current current) {
    const toml::node* n = Take(key);
    if (!n) return static_cast<int64_t>(current);
    auto v = n->value_exact<int64_t>();
    if (!v) throw ConfigError("expected an integer", Join(prefix_, key));
    if (*v < lo || *v > hi) throw ConfigError("integer out of range", Join(prefix_, key));
    return *v;
  }

  const toml::table* table_;
  std::string prefix_;
  std::set<std::string> used_;
};

// --set key=value: the value is read as a TOML literal, falling back to a bare string.
void ApplyOverride(toml::table& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' is not of the form key=value", "overrides");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  toml::table parsed;
  try {
    parsed = toml::parse("v = " + raw);
  } catch (const toml::parse_error&) {
    parsed = toml::table{};
    parsed.insert("v", raw);
  }
  toml::node* value = parsed.get("v");

  toml::table* t = &root;
  size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty segment", key);
    if (dot == std::string::npos) {
      value->visit([&](const auto& v) { t->insert_or_assign(part, v); });
      return;
    }
    toml::node* child = t->get(part);
    if (!child) {
      t->insert(part, toml::table{});
      child = t->get(part);
    }
    t = child->as_table();
    if (!t) throw ConfigError("override path crosses a non-table value", key);
    start = dot + 1;
  }
}

FeatureGrid GridFromToml(const toml::table& t, const std::string& prefix) {
  TableReader r(&t, prefix);
  std::string feature;
  double lower = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::quiet_NaN();
  double step = 0.0;
  std::vector<double> values;
  r.Get("feature", feature);
  r.Get("lower", lower);
  r.Get("upper", upper);
  const bool has_step = r.Has("step");
  const bool has_values = r.Has("values");
  r.Get("step", step);
  r.GetList("values", values);
  r.Finish();
  if (feature.empty()) throw ConfigError("grid needs a feature name", prefix + ".feature");
  if (has_step == has_values) throw ConfigError("grid needs exactly one of step or values", prefix);
  if (std::isnan(lower) || std::isnan(upper)) throw ConfigError("grid needs lower and upper bounds", prefix);
  if (has_step) return FeatureGrid::Range(feature, lower, upper, step);
  FeatureGrid g;
  g.feature_name = feature;
  g.lower = lower;
  g.upper = upper;
  g.values = std::move(values);
  g.Validate();
  return g;
}

RunConfig FromTable(const toml::table& root) {
  RunConfig cfg;
  TableReader top(&root, "");
  top.Get("seed", cfg.seed);

  {
    TableReader r(top.Sub("paths"), "paths");
    r.Get("out", cfg.paths.out);
    r.Get("data", cfg.paths.data);
    r.Get("target_data", cfg.paths.target_data);
    r.Get("checkpoint", cfg.paths.checkpoint);
    r.Get("tweet_embeddings", cfg.paths.tweet_embeddings);
    r.Finish();
  }
  {
    TableReader r(top.Sub("data"), "data");
    r.Get("n_per_class", cfg.data.n_per_class);
    r.Get("class_separation", cfg.data.class_separation);
    r.Get("embedding_dim", cfg.data.embedding_dim);
    r.Get("marginal_shift", cfg.data.marginal_shift);
    r.Get("covariance_mix", cfg.data.covariance_mix);
    r.Get("test_fraction", cfg.data.test_fraction);
    r.Finish();
  }
  {
    TableReader r(top.Sub("lobo"), "lobo");
    r.Get("target_marginal_shift", cfg.lobo.target_marginal_shift);
    r.Get("target_covariance_mix", cfg.lobo.target_covariance_mix);
    r.Finish();
  }
  {
    TableReader r(top.Sub("train"), "train");
    r.Get("batch_size", cfg.train.batch_size);
    r.Get("epochs", cfg.train.epochs);
    r.Get("learning_rate", cfg.train.learning_rate);
    r.Get("temperature", cfg.train.temperature);
    r.GetEnum("loss", cfg.train.loss, [](const std::string& s) { return ParseLossKind(s); });
    r.GetEnum("optimizer", cfg.train.optimizer, [](const std::string& s) { return ParseOptimizerKind(s); });
    r.Get("d", cfg.train.d);
    r.Get("out_dim", cfg.train.out_dim);
    r.Finish();
  }
  {
    TableReader r(top.Sub("augmentation"), "augmentation");
    r.GetEnum("kind", cfg.augmentation.kind, [](const std::string& s) { return ParseAugmentationKind(s); });
    r.Get("corruption_rate", cfg.augmentation.corruption_rate);
    r.Get("nan_rate", cfg.augmentation.nan_rate);
    r.Get("mice_iterations", cfg.augmentation.mice_iterations);
    r.GetEnum("view_mode", cfg.augmentation.view_mode, [](const std::string& s) { return ParseViewMode(s); });
    r.Finish();
  }
  {
    TableReader r(top.Sub("probe"), "probe");
    r.Get("max_iterations", cfg.probe.max_iterations);
    r.Get("learning_rate", cfg.probe.learning_rate);
    r.Get("tolerance", cfg.probe.tolerance);
    r.Get("fine_tune_steps", cfg.probe.fine_tune_steps);
    r.Get("fine_tune_learning_rate", cfg.probe.fine_tune_learning_rate);
    r.Finish();
  }
  {
    TableReader r(top.Sub("attack"), "attack");
    AttackGroup group = AttackGroup::kTemporal;
    r.GetEnum("group", group, [](const std::string& s) { return ParseAttackGroup(s); });
    cfg.attack.spec = AttackSpec::Default(group);
    r.Get("per_class", cfg.attack.per_class);
    r.Get("max_queries_per_sample", cfg.attack.spec.max_queries_per_sample);
    if (const toml::array* grids = r.Array("grids")) {
      cfg.attack.custom_grids = true;
      cfg.attack.spec.grids.clear();
      for (size_t i = 0; i < grids->size(); ++i) {
        const std::string prefix = "attack.grids[" + std::to_string(i) + "]";
        const toml::table* t = (*grids)[i].as_table();
        if (!t) throw ConfigError("expected a table", prefix);
        cfg.attack.spec.grids.push_back(GridFromToml(*t, prefix));
      }
    }
    r.Finish();
  }
  {
    TableReader r(top.Sub("sweep"), "sweep");
    r.GetList("corruption_rates", cfg.sweep.corruption_rates);
    r.GetList("batch_sizes", cfg.sweep.batch_sizes);
    r.GetList("epochs", cfg.sweep.epochs);
    if (r.Has("losses")) {
      std::vector<std::string> losses;
      r.GetList("losses", losses);
      cfg.sweep.losses.clear();
      for (size_t i = 0; i < losses.size(); ++i) {
        try {
          cfg.sweep.losses.push_back(ParseLossKind(losses[i]));
        } catch (const ConfigError& e) {
          throw ConfigError(e.what(), "sweep.losses[" + std::to_string(i) + "]");
        }
      }
    }
    r.Finish();
  }
  {
    TableReader r(top.Sub("gradcheck"), "gradcheck");
    r.Get("pairs", cfg.gradcheck.pairs);
    r.Get("width", cfg.gradcheck.width);
    r.Get("d", cfg.gradcheck.d);
    r.Get("out_dim", cfg.gradcheck.out_dim);
    r.Get("eps", cfg.gradcheck.eps);
    r.Get("tolerance", cfg.gradcheck.tolerance);
    r.Finish();
  }
  top.Finish();
  cfg.DeriveSeeds();
  cfg.Validate();
  return cfg;
}

std::string TomlDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string TomlString(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

template <typename T, typename F>
std::string TomlList(const std::vector<T>& v, F fmt) {
  std::string out = "[";
  for (size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i]);
  return out + "]";
}

}  // namespace

void RunConfig::DeriveSeeds() {
  train.seed = DerivedSeed(seed, "train");
  augmentation.seed = DerivedSeed(seed, "augmentation");
  attack.spec.seed = DerivedSeed(seed, "attack");
}

void RunConfig::Validate() const {
  train.Validate();
  augmentation.Validate();
  probe.Validate();
  if (!(data.test_fraction > 0.0 && data.test_fraction < 1.0)) {
    throw ConfigError("test_fraction must lie in (0, 1)", "data.test_fraction");
  }
  if (data.n_per_class < 2) throw ConfigError("n_per_class must be at least 2", "data.n_per_class");
  if (!(data.class_separation >= 0.0)) throw ConfigError("class_separation must be nonnegative", "data.class_separation");
  if (data.embedding_dim == 0) throw ConfigError("embedding_dim must be positive", "data.embedding_dim");
  if (!(data.covariance_mix >= 0.0)) throw ConfigError("covariance_mix must be nonnegative", "data.covariance_mix");
  if (!(lobo.target_covariance_mix >= 0.0)) {
    throw ConfigError("target_covariance_mix must be nonnegative", "lobo.target_covariance_mix");
  }
  if (paths.out.empty()) throw ConfigError("output directory is empty", "paths.out");
  if (!paths.data.empty() && !std::filesystem::exists(paths.data)) {
    throw ConfigError("dataset file not found: " + paths.data, "paths.data");
  }
  if (!paths.target_data.empty() && !std::filesystem::exists(paths.target_data)) {
    throw ConfigError("dataset file not found: " + paths.target_data, "paths.target_data");
  }
  if (!paths.tweet_embeddings.empty() && !std::filesystem::exists(paths.tweet_embeddings)) {
    throw ConfigError("tweet embedding file not found: " + paths.tweet_embeddings, "paths.tweet_embeddings");
  }
  if (attack.per_class == 0) throw ConfigError("per_class must be positive", "attack.per_class");
  if (attack.spec.max_queries_per_sample == 0) {
    throw ConfigError("max_queries_per_sample must be positive", "attack.max_queries_per_sample");
  }
  for (double r : sweep.corruption_rates) {
    if (!(r > 0.0 && r <= 1.0)) throw ConfigError("corruption rates must lie in (0, 1]", "sweep.corruption_rates");
  }
  for (int b : sweep.batch_sizes) {
    if (b < 4) throw ConfigError("batch sizes must be at least 4", "sweep.batch_sizes");
  }
  for (int e : sweep.epochs) {
    if (e < 0) throw ConfigError("epochs must be nonnegative", "sweep.epochs");
  }
  if (!(gradcheck.eps > 0.0)) throw ConfigError("eps must be positive", "gradcheck.eps");
  if (!(gradcheck.tolerance > 0.0)) throw ConfigError("tolerance must be positive", "gradcheck.tolerance");
}

std::filesystem::path RunConfig::checkpoint_path() const {
  if (!paths.checkpoint.empty()) return paths.checkpoint;
  return std::filesystem::path(paths.out) / "checkpoint.json";
}

SyntheticConfig RunConfig::synthetic(bool lobo_target) const {
  SyntheticConfig s;
  s.n_per_class = data.n_per_class;
  s.class_separation = data.class_separation;
  s.schema = FeatureSchema::Default(data.embedding_dim);
  s.structure_seed = DerivedSeed(seed, "structure");
  s.seed = DerivedSeed(seed, lobo_target ? "data.target" : "data");
  s.marginal_shift = lobo_target ? lobo.target_marginal_shift : data.marginal_shift;
  s.covariance_mix = lobo_target ? lobo.target_covariance_mix : data.covariance_mix;
  return s;
}

uint64_t RunConfig::split_seed() const { return DerivedSeed(seed, "split"); }

RunConfig ParseRunConfig(std::string_view toml_text, const std::vector<std::string>& overrides) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML parse error at line " << e.source().begin.line << ", column " << e.source().begin.column << ": "
        << e.description();
    throw ParseError(msg.str());
  }
  for (const auto& o : overrides) ApplyOverride(root, o);
  return FromTable(root);
}

RunConfig LoadRunConfig(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string(), "config");
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseRunConfig(buf.str(), overrides);
}

nlohmann::ordered_json ToJson(const TrainConfig& c) {
  nlohmann::ordered_json j;
  j["batch_size"] = c.batch_size;
  j["epochs"] = c.epochs;
  j["learning_rate"] = c.learning_rate;
  j["temperature"] = c.temperature;
  j["loss"] = std::string(ToString(c.loss));
  j["optimizer"] = std::string(ToString(c.optimizer));
  j["d"] = c.d;
  j["out_dim"] = c.out_dim;
  j["seed"] = c.seed;
  return j;
}

nlohmann::ordered_json ToJson(const AugmentationConfig& c) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(ToString(c.kind));
  j["corruption_rate"] = c.corruption_rate;
  j["nan_rate"] = c.nan_rate;
  j["mice_iterations"] = c.mice_iterations;
  j["view_mode"] = std::string(ToString(c.view_mode));
  j["seed"] = c.seed;
  return j;
}

nlohmann::ordered_json ToJson(const ProbeConfig& c) {
  nlohmann::ordered_json j;
  j["max_iterations"] = c.max_iterations;
  j["learning_rate"] = c.learning_rate;
  j["tolerance"] = c.tolerance;
  j["fine_tune_steps"] = c.fine_tune_steps;
  j["fine_tune_learning_rate"] = c.fine_tune_learning_rate;
  return j;
}

TrainConfig TrainConfigFromJson(const nlohmann::json& j) {
  TrainConfig c;
  c.batch_size = j.at("batch_size").get<int>();
  c.epochs = j.at("epochs").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.temperature = j.at("temperature").get<double>();
  c.loss = ParseLossKind(j.at("loss").get<std::string>());
  c.optimizer = ParseOptimizerKind(j.at("optimizer").get<std::string>());
  c.d = j.at("d").get<size_t>();
  c.out_dim = j.at("out_dim").get<size_t>();
  c.seed = j.at("seed").get<uint64_t>();
  return c;
}

AugmentationConfig AugmentationConfigFromJson(const nlohmann::json& j) {
  AugmentationConfig c;
  c.kind = ParseAugmentationKind(j.at("kind").get<std::string>());
  c.corruption_rate = j.at("corruption_rate").get<double>();
  c.nan_rate = j.at("nan_rate").get<double>();
  c.mice_iterations = j.at("mice_iterations").get<int>();
  c.view_mode = ParseViewMode(j.at("view_mode").get<std::string>());
  c.seed = j.at("seed").get<uint64_t>();
  return c;
}

nlohmann::ordered_json ToJson(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["paths"] = {{"out", c.paths.out},
                {"data", c.paths.data},
                {"target_data", c.paths.target_data},
                {"checkpoint", c.paths.checkpoint},
                {"tweet_embeddings", c.paths.tweet_embeddings}};
  j["data"] = {{"n_per_class", c.data.n_per_class},
               {"class_separation", c.data.class_separation},
               {"embedding_dim", c.data.embedding_dim},
               {"marginal_shift", c.data.marginal_shift},
               {"covariance_mix", c.data.covariance_mix},
               {"test_fraction", c.data.test_fraction}};
  j["lobo"] = {{"target_marginal_shift", c.lobo.target_marginal_shift},
               {"target_covariance_mix", c.lobo.target_covariance_mix}};
  j["train"] = ToJson(c.train);
  j["augmentation"] = ToJson(c.augmentation);
  j["probe"] = ToJson(c.probe);
  nlohmann::ordered_json attack;
  attack["group"] = std::string(ToString(c.attack.spec.group));
  attack["per_class"] = c.attack.per_class;
  attack["max_queries_per_sample"] = c.attack.spec.max_queries_per_sample;
  attack["seed"] = c.attack.spec.seed;
  attack["custom_grids"] = c.attack.custom_grids;
  nlohmann::ordered_json grids = nlohmann::ordered_json::array();
  for (const auto& g : c.attack.spec.grids) {
    grids.push_back({{"feature", g.feature_name}, {"lower", g.lower}, {"upper", g.upper}, {"values", g.values}});
  }
  attack["grids"] = std::move(grids);
  j["attack"] = std::move(attack);
  std::vector<std::string> losses;
  for (LossKind k : c.sweep.losses) losses.emplace_back(ToString(k));
  j["sweep"] = {{"corruption_rates", c.sweep.corruption_rates},
                {"batch_sizes", c.sweep.batch_sizes},
                {"epochs", c.sweep.epochs},
                {"losses", losses}};
  j["gradcheck"] = {{"pairs", c.gradcheck.pairs},     {"width", c.gradcheck.width},
                    {"d", c.gradcheck.d},             {"out_dim", c.gradcheck.out_dim},
                    {"eps", c.gradcheck.eps},         {"tolerance", c.gradcheck.tolerance}};
  return j;
}

std::string ToToml(const RunConfig& c) {
  std::ostringstream o;
  auto num = [](double v) { return TomlDouble(v); };
  auto integer = [](auto v) { return std::to_string(v); };
  o << "seed = " << c.seed << "\n\n";
  o << "[paths]\n"
    << "out = " << TomlString(c.paths.out) << "\n"
    << "data = " << TomlString(c.paths.data) << "\n"
    << "target_data = " << TomlString(c.paths.target_data) << "\n"
    << "checkpoint = " << TomlString(c.paths.checkpoint) << "\n"
    << "tweet_embeddings = " << TomlString(c.paths.tweet_embeddings) << "\n\n";
  o << "[data]\n"
    << "n_per_class = " << c.data.n_per_class << "\n"
    << "class_separation = " << num(c.data.class_separation) << "\n"
    << "embedding_dim = " << c.data.embedding_dim << "\n"
    << "marginal_shift = " << num(c.data.marginal_shift) << "\n"
    << "covariance_mix = " << num(c.data.covariance_mix) << "\n"
    << "test_fraction = " << num(c.data.test_fraction) << "\n\n";
  o << "[lobo]\n"
    << "target_marginal_shift = " << num(c.lobo.target_marginal_shift) << "\n"
    << "target_covariance_mix = " << num(c.lobo.target_covariance_mix) << "\n\n";
  o << "[train]\n"
    << "batch_size = " << c.train.batch_size << "\n"
    << "epochs = " << c.train.epochs << "\n"
    << "learning_rate = " << num(c.train.learning_rate) << "\n"
    << "temperature = " << num(c.train.temperature) << "\n"
    << "loss = " << TomlString(ToString(c.train.loss)) << "\n"
    << "optimizer = " << TomlString(ToString(c.train.optimizer)) << "\n"
    << "d = " << c.train.d << "\n"
    << "out_dim = " << c.train.out_dim << "\n\n";
  o << "[augmentation]\n"
    << "kind = " << TomlString(ToString(c.augmentation.kind)) << "\n"
    << "corruption_rate = " << num(c.augmentation.corruption_rate) << "\n"
    << "nan_rate = " << num(c.augmentation.nan_rate) << "\n"
    << "mice_iterations = " << c.augmentation.mice_iterations << "\n"
    << "view_mode = " << TomlString(ToString(c.augmentation.view_mode)) << "\n\n";
  o << "[probe]\n"
    << "max_iterations = " << c.probe.max_iterations << "\n"
    << "learning_rate = " << num(c.probe.learning_rate) << "\n"
    << "tolerance = " << num(c.probe.tolerance) << "\n"
    << "fine_tune_steps = " << c.probe.fine_tune_steps << "\n"
    << "fine_tune_learning_rate = " << num(c.probe.fine_tune_learning_rate) << "\n\n";
  o << "[attack]\n"
    << "group = " << TomlString(ToString(c.attack.spec.group)) << "\n"
    << "per_class = " << c.attack.per_class << "\n"
    << "max_queries_per_sample = " << c.attack.spec.max_queries_per_sample << "\n\n";
  if (c.attack.custom_grids) {
    for (const auto& g : c.attack.spec.grids) {
      o << "[[attack.grids]]\n"
        << "feature = " << TomlString(g.feature_name) << "\n"
        << "lower = " << num(g.lower) << "\n"
        << "upper = " << num(g.upper) << "\n"
        << "values = " << TomlList(g.values, num) << "\n\n";
    }
  }
  o << "[sweep]\n"
    << "corruption_rates = " << TomlList(c.sweep.corruption_rates, num) << "\n"
    << "batch_sizes = " << TomlList(c.sweep.batch_sizes, integer) << "\n"
    << "epochs = " << TomlList(c.sweep.epochs, integer) << "\n"
    << "losses = "
    << TomlList(c.sweep.losses, [](LossKind k) { return TomlString(ToString(k)); }) << "\n\n";
  o << "[gradcheck]\n"
    << "pairs = " << c.gradcheck.pairs << "\n"
    << "width = " << c.gradcheck.width << "\n"
    << "d = " << c.gradcheck.d << "\n"
    << "out_dim = " << c.gradcheck.out_dim << "\n"
    << "eps = " << num(c.gradcheck.eps) << "\n"
    << "tolerance = " << num(c.gradcheck.tolerance) << "\n";
  return o.str();
}

}  // namespace botcon
