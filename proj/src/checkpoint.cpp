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
#include "botcon/checkpoint.hpp"

#include <fstream>

namespace botcon {
namespace {

std::vector<double> ToStd(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector ToVector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

Pipeline Checkpoint::pipeline() const {
  if (!probe) throw ConfigError("checkpoint has no fitted probe; run eval first", "paths.checkpoint");
  return Pipeline{norm, model, *probe};
}

nlohmann::ordered_json ToJson(const NormStats& s) {
  nlohmann::ordered_json j;
  j["columns"] = s.columns;
  j["means"] = ToStd(s.means);
  j["stds"] = ToStd(s.stds);
  j["schema_hash"] = s.schema_hash;
  j["width"] = s.width;
  return j;
}

NormStats NormStatsFromJson(const nlohmann::json& j) {
  NormStats s;
  s.columns = j.at("columns").get<std::vector<size_t>>();
  s.means = ToVector(j.at("means").get<std::vector<double>>());
  s.stds = ToVector(j.at("stds").get<std::vector<double>>());
  s.schema_hash = j.at("schema_hash").get<uint64_t>();
  s.width = j.at("width").get<size_t>();
  if (s.means.size() != static_cast<Eigen::Index>(s.columns.size()) ||
      s.stds.size() != static_cast<Eigen::Index>(s.columns.size())) {
    throw ParseError("normalizer statistics have inconsistent lengths");
  }
  return s;
}

nlohmann::ordered_json ToJson(const ProbeParams& p) {
  nlohmann::ordered_json j;
  j["weight"] = ToStd(p.weight);
  j["bias"] = p.bias;
  j["class_weights"] = p.class_weights;
  j["iterations"] = p.iterations;
  j["learning_rate"] = p.learning_rate;
  j["final_gradient_norm"] = p.final_gradient_norm;
  return j;
}

ProbeParams ProbeParamsFromJson(const nlohmann::json& j) {
  ProbeParams p;
  p.weight = ToVector(j.at("weight").get<std::vector<double>>());
  p.bias = j.at("bias").get<double>();
  p.class_weights = j.at("class_weights").get<std::array<double, 2>>();
  p.iterations = j.at("iterations").get<int>();
  p.learning_rate = j.at("learning_rate").get<double>();
  p.final_gradient_norm = j.at("final_gradient_norm").get<double>();
  return p;
}

nlohmann::ordered_json ToJson(const TrainHistory& h, bool normalized) {
  nlohmann::ordered_json j;
  j["seed"] = h.seed;
  j["steps"] = h.steps;
  j["fingerprint"] = h.fingerprint;
  j["epoch_loss"] = h.epoch_loss;
  if (!normalized) j["epoch_seconds"] = h.epoch_seconds;
  return j;
}

nlohmann::ordered_json ToJson(const Checkpoint& c) {
  nlohmann::ordered_json j;
  j["version"] = kCheckpointVersion;
  j["schema"] = SchemaToJson(c.schema);
  j["schema_hash"] = c.schema.hash();
  j["normalizer"] = ToJson(c.norm);
  j["d"] = c.model.d();
  j["out_dim"] = c.model.out_dim();
  nlohmann::ordered_json tensors;
  c.model.ForEachTensor([&](std::string_view name, std::span<const double> s) {
    tensors[std::string(name)] = std::vector<double>(s.begin(), s.end());
  });
  j["tensors"] = std::move(tensors);
  j["fingerprint"] = c.model.Fingerprint();
  j["probe"] = c.probe ? ToJson(*c.probe) : nlohmann::ordered_json(nullptr);
  j["train"] = ToJson(c.train);
  j["augmentation"] = ToJson(c.augmentation);
  j["history"] = ToJson(c.history, true);
  return j;
}

Checkpoint CheckpointFromJson(const nlohmann::json& j) {
  try {
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion) throw ParseError("unsupported checkpoint version " + std::to_string(version));
    Checkpoint c;
    c.schema = SchemaFromJson(j.at("schema"));
    c.schema.Validate();
    if (j.at("schema_hash").get<uint64_t>() != c.schema.hash()) throw ParseError("checkpoint schema hash mismatch");
    c.norm = NormStatsFromJson(j.at("normalizer"));
    if (c.norm.schema_hash != c.schema.hash()) throw ParseError("normalizer was fit on a different schema");
    c.model = ModelParams::Init(c.schema, j.at("d").get<size_t>(), j.at("out_dim").get<size_t>(), 0);
    const auto& tensors = j.at("tensors");
    c.model.ForEachTensor([&](std::string_view name, std::span<double> s) {
      const auto values = tensors.at(std::string(name)).get<std::vector<double>>();
      if (values.size() != s.size()) throw ParseError("tensor " + std::string(name) + " has the wrong size");
      std::copy(values.begin(), values.end(), s.begin());
    });
    if (j.at("fingerprint").get<uint64_t>() != c.model.Fingerprint()) {
      throw ParseError("checkpoint fingerprint mismatch");
    }
    if (!j.at("probe").is_null()) {
      c.probe = ProbeParamsFromJson(j.at("probe"));
      if (c.probe->weight.size() != static_cast<Eigen::Index>(c.model.d())) {
        throw ParseError("probe width does not match the encoder");
      }
    }
    c.train = TrainConfigFromJson(j.at("train"));
    c.augmentation = AugmentationConfigFromJson(j.at("augmentation"));
    const auto& h = j.at("history");
    c.history.seed = h.at("seed").get<uint64_t>();
    c.history.steps = h.at("steps").get<size_t>();
    c.history.fingerprint = h.at("fingerprint").get<uint64_t>();
    c.history.epoch_loss = h.at("epoch_loss").get<std::vector<double>>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed checkpoint: ") + e.what());
  }
}

void SaveCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << ToJson(ckpt).dump(1) << "\n";
  if (!out) throw DataError("write failed for " + path.string());
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("missing checkpoint " + path.string(), "paths.checkpoint");
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open checkpoint " + path.string(), "paths.checkpoint");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return CheckpointFromJson(j);
}

}  // namespace botcon
