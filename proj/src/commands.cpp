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
#include "botcon/commands.hpp"

#include <charconv>
#include <chrono>
#include <fstream>

#include "botcon/adversarial.hpp"
#include "botcon/checkpoint.hpp"
#include "botcon/log.hpp"

namespace botcon {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

void WriteJson(const fs::path& path, const Json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw DataError("write failed for " + path.string());
}

Json Envelope(std::string_view command, const RunConfig& cfg) {
  Json j;
  j["command"] = std::string(command);
  j["build_id"] = std::string(BuildId());
  j["config"] = ToJson(cfg);
  return j;
}

Dataset LoadData(const RunConfig& cfg, bool lobo_target) {
  const std::string& path = lobo_target ? cfg.paths.target_data : cfg.paths.data;
  Dataset ds = path.empty() ? GenerateSynthetic(cfg.synthetic(lobo_target)) : LoadDataset(path);
  if (!lobo_target && !cfg.paths.tweet_embeddings.empty()) AttachTweetEmbeddings(ds, cfg.paths.tweet_embeddings);
  ds.RequireLabels();
  return ds;
}

EpochCallback ProgressLogger(int epochs) {
  const int every = std::max(1, epochs / 10);
  return [every](int epoch, double loss) {
    if ((epoch + 1) % every == 0) LogInfo("epoch " + std::to_string(epoch + 1) + " loss " + std::to_string(loss));
  };
}

// Frozen pipeline from the checkpoint; fits the probe on the train split when
// the checkpoint does not carry one.
Pipeline ResolvePipeline(const RunConfig& cfg, const Checkpoint& ckpt, const Dataset& train_raw) {
  if (ckpt.probe) return ckpt.pipeline();
  Pipeline p{ckpt.norm, ckpt.model, {}};
  p.probe = FitProbeOnModel(ckpt.model, ApplyNormalizer(ckpt.norm, train_raw), cfg.probe, &p.model);
  return p;
}

Checkpoint LoadCompatibleCheckpoint(const RunConfig& cfg, const Dataset& ds) {
  Checkpoint ckpt = LoadCheckpoint(cfg.checkpoint_path());
  if (!(ckpt.schema == ds.schema)) throw ConfigError("checkpoint schema does not match the dataset", "paths.data");
  return ckpt;
}

Json SplitJson(const Dataset& train, const Dataset& test) {
  return {{"train_rows", train.size()}, {"test_rows", test.size()}};
}

CommandResult GenData(const RunConfig& cfg, const CommandOptions&) {
  const fs::path out = cfg.paths.out;
  const Dataset a = GenerateSynthetic(cfg.synthetic(false));
  const Dataset b = GenerateSynthetic(cfg.synthetic(true));
  SaveDataset(a, out / "data.csv");
  SaveDataset(b, out / "data_target.csv");
  Json j = Envelope("gen-data", cfg);
  j["result"] = {{"data", (out / "data.csv").string()},
                 {"target_data", (out / "data_target.csv").string()},
                 {"rows", a.size()},
                 {"width", a.schema.width()}};
  return {j, out / "gen_data_report.json", 0};
}

CommandResult TrainCmd(const RunConfig& cfg, const CommandOptions& opts) {
  const Dataset ds = LoadData(cfg, false);
  auto [train_raw, test_raw] = SplitDataset(ds, cfg.data.test_fraction, cfg.split_seed());
  Checkpoint ckpt;
  ckpt.schema = ds.schema;
  ckpt.norm = FitNormalizer(train_raw);
  TrainResult trained =
      Train(ApplyNormalizer(ckpt.norm, train_raw), cfg.train, cfg.augmentation, ProgressLogger(cfg.train.epochs));
  ckpt.model = std::move(trained.params);
  ckpt.train = cfg.train;
  ckpt.augmentation = cfg.augmentation;
  ckpt.history = trained.history;
  SaveCheckpoint(ckpt, cfg.checkpoint_path());

  Json j = Envelope("train", cfg);
  j["result"] = {{"checkpoint", cfg.checkpoint_path().string()},
                 {"split", SplitJson(train_raw, test_raw)},
                 {"parameters", ckpt.model.parameter_count()},
                 {"history", ToJson(trained.history, opts.normalized)}};
  return {j, fs::path(cfg.paths.out) / "train_report.json", 0};
}

CommandResult EvalCmd(const RunConfig& cfg, const CommandOptions&) {
  const Dataset ds = LoadData(cfg, false);
  Checkpoint ckpt = LoadCompatibleCheckpoint(cfg, ds);
  auto [train_raw, test_raw] = SplitDataset(ds, cfg.data.test_fraction, cfg.split_seed());
  ckpt.probe.reset();
  const Pipeline p = ResolvePipeline(cfg, ckpt, train_raw);
  ckpt.model = p.model;
  ckpt.probe = p.probe;
  const fs::path pipeline_path = fs::path(cfg.paths.out) / "pipeline.json";
  SaveCheckpoint(ckpt, pipeline_path);

  Json j = Envelope("eval", cfg);
  j["result"] = {{"pipeline", pipeline_path.string()},
                 {"split", SplitJson(train_raw, test_raw)},
                 {"probe", {{"iterations", p.probe.iterations}, {"final_gradient_norm", p.probe.final_gradient_norm}}},
                 {"test", ToJson(EvaluatePipeline(p, test_raw))},
                 {"train", ToJson(EvaluatePipeline(p, train_raw))}};
  j["macro_f1"] = j["result"]["test"]["macro_f1"];
  return {j, fs::path(cfg.paths.out) / "eval_report.json", 0};
}

Json LoboDirection(const LoboResult& r, const CommandOptions& opts) {
  Json j;
  j["within_source"] = ToJson(r.source);
  j["cross_target"] = ToJson(r.target);
  j["gap"] = r.source.macro.f1 - r.target.macro.f1;
  j["history"] = ToJson(r.experiment.history, opts.normalized);
  return j;
}

CommandResult LoboCmd(const RunConfig& cfg, const CommandOptions& opts) {
  const Dataset a = LoadData(cfg, false);
  const Dataset b = LoadData(cfg, true);
  const double f = cfg.data.test_fraction;
  const LoboResult ab = Lobo(a, b, f, cfg.split_seed(), cfg.train, cfg.augmentation, cfg.probe);
  const LoboResult ba = Lobo(b, a, f, cfg.split_seed(), cfg.train, cfg.augmentation, cfg.probe);
  Json j = Envelope("lobo", cfg);
  j["result"] = {{"a_to_b", LoboDirection(ab, opts)}, {"b_to_a", LoboDirection(ba, opts)}};
  return {j, fs::path(cfg.paths.out) / "lobo_report.json", 0};
}

CommandResult AttackCmd(const RunConfig& cfg, const CommandOptions& opts) {
  const Dataset ds = LoadData(cfg, false);
  const Checkpoint ckpt = LoadCompatibleCheckpoint(cfg, ds);
  auto [train_raw, test_raw] = SplitDataset(ds, cfg.data.test_fraction, cfg.split_seed());
  const Pipeline p = ResolvePipeline(cfg, ckpt, train_raw);
  const PipelineClassifier model(p);
  cfg.attack.spec.Validate(ds.schema);
  const Dataset samples = SelectCampaignSamples(model, test_raw, cfg.attack.per_class, cfg.attack.spec.seed);
  const CountingClassifier counter(model);
  const AttackReport report = AttackCampaign(counter, samples, cfg.attack.spec);

  Json j = Envelope("attack", cfg);
  j["result"] = ToJson(report, cfg.attack.spec, opts.normalized);
  j["result"]["predict_calls"] = counter.calls();
  return {j, fs::path(cfg.paths.out) / "attack_report.json", 0};
}

CommandResult SweepCmd(const RunConfig& cfg, const CommandOptions& opts) {
  const std::string& axis = opts.axis;
  std::vector<RunConfig> points;
  std::vector<Json> labels;
  auto add = [&](auto setter, const Json& label) {
    RunConfig c = cfg;
    setter(c);
    points.push_back(std::move(c));
    labels.push_back(label);
  };
  if (axis == "corruption_rate") {
    for (double v : cfg.sweep.corruption_rates) add([v](RunConfig& c) { c.augmentation.corruption_rate = v; }, v);
  } else if (axis == "batch_size") {
    for (int v : cfg.sweep.batch_sizes) add([v](RunConfig& c) { c.train.batch_size = v; }, v);
  } else if (axis == "epochs") {
    for (int v : cfg.sweep.epochs) add([v](RunConfig& c) { c.train.epochs = v; }, v);
  } else if (axis == "loss") {
    for (LossKind v : cfg.sweep.losses) add([v](RunConfig& c) { c.train.loss = v; }, std::string(ToString(v)));
  } else {
    throw ConfigError("unknown sweep axis '" + axis + "' (corruption_rate, batch_size, epochs, loss)", "axis");
  }
  if (points.empty()) throw ConfigError("sweep list for axis '" + axis + "' is empty", "sweep");

  const Dataset ds = LoadData(cfg, false);
  const fs::path dir = fs::path(cfg.paths.out) / "sweep";
  Json summary = Json::array();
  for (size_t i = 0; i < points.size(); ++i) {
    points[i].Validate();
    LogInfo("sweep " + axis + " = " + labels[i].dump());
    const ExperimentResult r = RunWithinDataset(ds, cfg.data.test_fraction, cfg.split_seed(), points[i].train,
                                                points[i].augmentation, points[i].probe);
    Json point = Envelope("eval", points[i]);
    point["sweep_axis"] = axis;
    point["sweep_value"] = labels[i];
    point["result"] = {{"test", ToJson(r.test_report)}, {"history", ToJson(r.history, opts.normalized)}};
    point["macro_f1"] = r.test_report.macro.f1;
    const fs::path path = dir / (axis + "_" + std::to_string(i) + ".json");
    WriteJson(path, point);
    summary.push_back({{"value", labels[i]}, {"macro_f1", r.test_report.macro.f1}, {"report", path.string()}});
  }
  Json j = Envelope("sweep", cfg);
  j["result"] = {{"axis", axis}, {"points", summary}};
  return {j, dir / (axis + "_summary.json"), 0};
}

CommandResult GradCheckCmd(const RunConfig& cfg, const CommandOptions&) {
  const auto& g = cfg.gradcheck;
  const GradCheckInstance inst = MakeGradCheckInstance(DerivedSeed(cfg.seed, "gradcheck"), g.pairs, g.width, g.d, g.out_dim);
  Json per_loss = Json::object();
  double worst = 0.0;
  for (LossKind kind : {LossKind::kSelf, LossKind::kSup, LossKind::kSupMod}) {
    const GradCheckResult r =
        GradCheck(kind, inst.params, inst.views, inst.partner, inst.labels, cfg.train.temperature, g.eps);
    worst = std::max(worst, r.max_relative_error);
    per_loss[std::string(ToString(kind))] = {{"max_relative_error", r.max_relative_error},
                                             {"worst_tensor", r.worst_tensor},
                                             {"worst_index", r.worst_index},
                                             {"analytic", r.analytic},
                                             {"numeric", r.numeric},
                                             {"checked", r.checked}};
  }
  Json j = Envelope("gradcheck", cfg);
  const bool pass = worst <= g.tolerance;
  j["result"] = {{"losses", per_loss}, {"max_relative_error", worst}, {"tolerance", g.tolerance}, {"pass", pass}};
  return {j, fs::path(cfg.paths.out) / "gradcheck_report.json", pass ? 0 : 1};
}

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CommandResult ExportEmbeddings(const RunConfig& cfg, const CommandOptions&) {
  const Dataset ds = LoadData(cfg, false);
  const Checkpoint ckpt = LoadCompatibleCheckpoint(cfg, ds);
  const Matrix h = EncodeBatch(ckpt.model, ApplyNormalizer(ckpt.norm, ds).rows);
  const fs::path path = fs::path(cfg.paths.out) / "embeddings.csv";
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "id";
  for (Eigen::Index k = 0; k < h.cols(); ++k) out << ",h_" << k;
  if (ds.labels) out << ",label";
  out << '\n';
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    out << ds.ids[static_cast<size_t>(i)];
    for (Eigen::Index k = 0; k < h.cols(); ++k) out << ',' << FormatDouble(h(i, k));
    if (ds.labels) out << ',' << (*ds.labels)[static_cast<size_t>(i)];
    out << '\n';
  }
  if (!out) throw DataError("write failed for " + path.string());
  Json j = Envelope("export-embeddings", cfg);
  j["result"] = {{"embeddings", path.string()}, {"rows", h.rows()}, {"width", h.cols()}};
  return {j, fs::path(cfg.paths.out) / "export_report.json", 0};
}

}  // namespace

const std::vector<std::string_view>& CommandNames() {
  static const std::vector<std::string_view> kNames = {"gen-data", "train",     "eval",     "lobo",
                                                       "attack",   "sweep",     "gradcheck", "export-embeddings"};
  return kNames;
}

CommandResult RunCommand(std::string_view command, const RunConfig& cfg, const CommandOptions& opts) {
  cfg.Validate();
  const auto start = std::chrono::steady_clock::now();
  CommandResult r;
  if (command == "gen-data") {
    r = GenData(cfg, opts);
  } else if (command == "train") {
    r = TrainCmd(cfg, opts);
  } else if (command == "eval") {
    r = EvalCmd(cfg, opts);
  } else if (command == "lobo") {
    r = LoboCmd(cfg, opts);
  } else if (command == "attack") {
    r = AttackCmd(cfg, opts);
  } else if (command == "sweep") {
    r = SweepCmd(cfg, opts);
  } else if (command == "gradcheck") {
    r = GradCheckCmd(cfg, opts);
  } else if (command == "export-embeddings") {
    r = ExportEmbeddings(cfg, opts);
  } else {
    throw ConfigError("unknown command '" + std::string(command) + "'", "command");
  }
  if (!opts.normalized) {
    r.report["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  WriteJson(r.report_path, r.report);
  return r;
}

Json ErrorReport(std::string_view command, const std::exception& e) {
  Json err;
  err["command"] = std::string(command);
  if (const auto* be = dynamic_cast<const Error*>(&e)) {
    err["kind"] = be->kind();
  } else {
    err["kind"] = "internal";
  }
  err["message"] = e.what();
  if (const auto* ce = dynamic_cast<const ConfigError*>(&e); ce && !ce->field().empty()) err["field"] = ce->field();
  return Json{{"error", err}};
}

}  // namespace botcon
