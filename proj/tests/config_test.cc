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

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "botcon/checkpoint.hpp"
#include "botcon/commands.hpp"
#include "test_util.hpp"

namespace botcon {
namespace {

using testing::TempDir;

std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string FieldOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

TEST(ConfigTest, EmptyTextGivesDefaults) {
  const RunConfig cfg = ParseRunConfig("");
  EXPECT_EQ(cfg.train.batch_size, 512);
  EXPECT_EQ(cfg.train.epochs, 5000);
  EXPECT_EQ(cfg.train.learning_rate, 0.001);
  EXPECT_EQ(cfg.train.temperature, 1.0);
  EXPECT_EQ(cfg.train.loss, LossKind::kSelf);
  EXPECT_EQ(cfg.augmentation.corruption_rate, 0.6);
  EXPECT_EQ(cfg.augmentation.view_mode, ViewMode::kOneView);
  EXPECT_EQ(cfg.attack.spec.group, AttackGroup::kTemporal);
  EXPECT_EQ(cfg.train.seed, DerivedSeed(0, "train"));
}

TEST(ConfigTest, ParsesTablesAndOverrides) {
  const std::string text = R"(
seed = 5
[train]
epochs = 10
loss = "sup_mod"
[augmentation]
kind = "linear"
view_mode = "two_view"
[attack]
group = "user_meta"
)";
  const RunConfig cfg = ParseRunConfig(text, {"train.batch_size=64", "augmentation.corruption_rate=0.4", "seed=9"});
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.train.epochs, 10);
  EXPECT_EQ(cfg.train.batch_size, 64);
  EXPECT_EQ(cfg.train.loss, LossKind::kSupMod);
  EXPECT_EQ(cfg.augmentation.kind, AugmentationKind::kLinear);
  EXPECT_EQ(cfg.augmentation.view_mode, ViewMode::kTwoView);
  EXPECT_EQ(cfg.augmentation.corruption_rate, 0.4);
  EXPECT_EQ(cfg.attack.spec.group, AttackGroup::kUserMeta);
  EXPECT_EQ(cfg.attack.spec.grids[0].feature_name, "followers_count");
  EXPECT_EQ(cfg.train.seed, DerivedSeed(9, "train"));
  EXPECT_EQ(ParseRunConfig("", {"paths.out=somewhere"}).paths.out, "somewhere");
}

TEST(ConfigTest, ErrorsCarryFieldPath) {
  EXPECT_EQ(FieldOf([] { ParseRunConfig("[train]\nepoch = 3\n"); }), "train.epoch");
  EXPECT_EQ(FieldOf([] { ParseRunConfig("[train]\nepochs = \"many\"\n"); }), "train.epochs");
  EXPECT_EQ(FieldOf([] { ParseRunConfig("[train]\nbatch_size = 2\n"); }), "train.batch_size");
  EXPECT_EQ(FieldOf([] { ParseRunConfig("[augmentation]\ncorruption_rate = 1.5\n"); }),
            "augmentation.corruption_rate");
  EXPECT_EQ(FieldOf([] { ParseRunConfig("[train]\nloss = \"triplet\"\n"); }), "train.loss");
  EXPECT_EQ(FieldOf([] { ParseRunConfig("[paths]\ndata = \"/no/such/file.csv\"\n"); }), "paths.data");
  EXPECT_THROW(ParseRunConfig("[train\n"), ParseError);
}

TEST(ConfigTest, CustomGrids) {
  const std::string text = R"(
[attack]
group = "temporal"
[[attack.grids]]
feature = "max_tweets_per_hour"
lower = 0.0
upper = 10.0
step = 5.0
[[attack.grids]]
feature = "tweet_frequency"
lower = 0.0
upper = 3.0
values = [0.0, 1.5, 3.0]
)";
  const RunConfig cfg = ParseRunConfig(text);
  ASSERT_TRUE(cfg.attack.custom_grids);
  ASSERT_EQ(cfg.attack.spec.grids.size(), 2u);
  EXPECT_EQ(cfg.attack.spec.grids[0].values, (std::vector<double>{0, 5, 10}));
  EXPECT_EQ(cfg.attack.spec.ProductSize(), 9u);
  EXPECT_THROW(ParseRunConfig("[[attack.grids]]\nfeature = \"x\"\nlower = 0.0\nupper = 1.0\n"), ConfigError);
}

TEST(ConfigTest, TomlRoundTrip) {
  RunConfig cfg = ParseRunConfig("", {"seed=77", "train.learning_rate=0.0123", "train.loss='sup'",
                                      "sweep.corruption_rates=[0.3, 0.45]", "data.embedding_dim=32"});
  const RunConfig back = ParseRunConfig(ToToml(cfg));
  EXPECT_EQ(ToJson(back).dump(), ToJson(cfg).dump());
}

TEST(ConfigTest, DerivedSeedsDiffer) {
  const RunConfig cfg = ParseRunConfig("seed = 3");
  EXPECT_NE(cfg.train.seed, cfg.augmentation.seed);
  EXPECT_NE(cfg.synthetic(false).seed, cfg.synthetic(true).seed);
  EXPECT_EQ(cfg.synthetic(false).structure_seed, cfg.synthetic(true).structure_seed);
  EXPECT_NE(DerivedSeed(3, "train"), DerivedSeed(4, "train"));
}

Checkpoint SmallCheckpoint() {
  SyntheticConfig s;
  s.n_per_class = 20;
  s.schema = testing::SmallSchema(4, 4, 3, 3);
  const Dataset raw = GenerateSynthetic(s);
  Checkpoint c;
  c.schema = raw.schema;
  c.norm = FitNormalizer(raw);
  c.train.d = 3;
  c.train.out_dim = 5;
  c.train.epochs = 2;
  c.train.batch_size = 16;
  TrainResult tr = Train(ApplyNormalizer(c.norm, raw), c.train, c.augmentation);
  c.model = tr.params;
  c.history = tr.history;
  c.probe = FitProbeOnModel(c.model, ApplyNormalizer(c.norm, raw), ProbeConfig{});
  return c;
}

TEST(CheckpointTest, ExactRoundTrip) {
  TempDir dir("ckpt");
  const Checkpoint c = SmallCheckpoint();
  SaveCheckpoint(c, dir.path() / "c.json");
  const Checkpoint back = LoadCheckpoint(dir.path() / "c.json");
  EXPECT_TRUE(back.model == c.model);
  EXPECT_EQ(back.norm.means, c.norm.means);
  EXPECT_EQ(back.norm.stds, c.norm.stds);
  EXPECT_EQ(back.probe->weight, c.probe->weight);
  EXPECT_EQ(back.probe->bias, c.probe->bias);
  EXPECT_EQ(back.history.epoch_loss, c.history.epoch_loss);
  EXPECT_EQ(ToJson(back).dump(), ToJson(c).dump());
}

TEST(CheckpointTest, MissingAndCorrupt) {
  TempDir dir("ckpt");
  try {
    LoadCheckpoint(dir.path() / "absent.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "paths.checkpoint");
  }
  auto j = ToJson(SmallCheckpoint());
  j["tensors"]["enc.b1"][0] = 123.0;
  std::ofstream(dir.path() / "bad.json") << j.dump();
  EXPECT_THROW(LoadCheckpoint(dir.path() / "bad.json"), ParseError);
  std::ofstream(dir.path() / "junk.json") << "{";
  EXPECT_THROW(LoadCheckpoint(dir.path() / "junk.json"), ParseError);
}

RunConfig TinyRun(const std::filesystem::path& out) {
  return ParseRunConfig("", {"paths.out='" + out.string() + "'", "data.n_per_class=30", "data.embedding_dim=4",
                             "train.epochs=3", "train.batch_size=16", "train.d=4", "train.out_dim=8",
                             "attack.per_class=2"});
}

TEST(CommandsTest, GradCheckPasses) {
  TempDir dir("cmd");
  const CommandResult r = RunCommand("gradcheck", TinyRun(dir.path()), {true});
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.report["result"]["pass"].get<bool>());
  EXPECT_TRUE(std::filesystem::exists(r.report_path));
  EXPECT_EQ(r.report["command"], "gradcheck");
  EXPECT_TRUE(r.report.contains("build_id"));
}

TEST(CommandsTest, TrainEvalAttackChain) {
  TempDir dir("cmd");
  const RunConfig cfg = TinyRun(dir.path());
  EXPECT_THROW(RunCommand("eval", cfg, {true}), ConfigError);  // no checkpoint yet
  RunCommand("train", cfg, {true});
  EXPECT_TRUE(std::filesystem::exists(cfg.checkpoint_path()));
  const CommandResult ev = RunCommand("eval", cfg, {true});
  const double f1 = ev.report["macro_f1"].get<double>();
  EXPECT_GE(f1, 0.0);
  EXPECT_LE(f1, 1.0);
  const CommandResult at = RunCommand("attack", cfg, {true});
  const auto& res = at.report["result"];
  EXPECT_EQ(res["initial_samples"].get<uint64_t>(), 4u);
  EXPECT_EQ(res["predict_calls"].get<uint64_t>(),
            res["initial_samples"].get<uint64_t>() + res["total_queries"].get<uint64_t>() +
                res["successes"].get<uint64_t>());
  const CommandResult ex = RunCommand("export-embeddings", cfg, {true});
  EXPECT_EQ(ex.report["result"]["width"].get<int>(), 4);
}

TEST(CommandsTest, GenDataFeedsTrain) {
  TempDir dir("cmd");
  const RunConfig gen = TinyRun(dir.path() / "fresh" / "nested");
  const CommandResult r = RunCommand("gen-data", gen, {true});
  const std::string csv = r.report["result"]["data"].get<std::string>();
  ASSERT_TRUE(std::filesystem::exists(csv));
  EXPECT_TRUE(std::filesystem::exists(r.report["result"]["target_data"].get<std::string>()));
  // Training from the written CSV matches training on the in-memory synthetic data.
  RunConfig from_csv = gen;
  from_csv.paths.data = csv;
  from_csv.paths.out = (dir.path() / "a").string();
  RunConfig synthetic = gen;
  synthetic.paths.out = (dir.path() / "b").string();
  RunCommand("train", from_csv, {true});
  RunCommand("train", synthetic, {true});
  EXPECT_EQ(LoadCheckpoint(from_csv.checkpoint_path()).model.Fingerprint(),
            LoadCheckpoint(synthetic.checkpoint_path()).model.Fingerprint());
}

TEST(CommandsTest, TrainIsByteIdentical) {
  TempDir dir("cmd");
  const RunConfig cfg = TinyRun(dir.path());
  RunCommand("train", cfg, {true});
  const std::string c1 = ReadFile(cfg.checkpoint_path());
  const std::string r1 = ReadFile(dir.path() / "train_report.json");
  RunCommand("train", cfg, {true});
  EXPECT_EQ(ReadFile(cfg.checkpoint_path()), c1);
  EXPECT_EQ(ReadFile(dir.path() / "train_report.json"), r1);
}

TEST(CommandsTest, UnknownCommandAndErrorReport) {
  TempDir dir("cmd");
  try {
    RunCommand("fly", TinyRun(dir.path()));
    FAIL();
  } catch (const ConfigError& e) {
    const auto j = ErrorReport("fly", e);
    EXPECT_EQ(j["error"]["kind"], "config");
    EXPECT_EQ(j["error"]["field"], "command");
  }
  const auto j = ErrorReport("x", std::runtime_error("boom"));
  EXPECT_EQ(j["error"]["kind"], "internal");
}

}  // namespace
}  // namespace botcon
