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

#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace botcon {
namespace {

using testing::RandomDataset;
using testing::SmallSchema;
using testing::TempDir;

TEST(FeatureSchemaTest, DefaultWidths) {
  const FeatureSchema s = FeatureSchema::Default();
  EXPECT_EQ(s.user_meta_names.size(), 33u);
  EXPECT_EQ(s.tweet_meta_names.size(), 29u);
  EXPECT_EQ(s.temporal_names.size(), 7u);
  EXPECT_EQ(s.embedding_dim, 768u);
  EXPECT_EQ(s.width(), 33u + 768u + 29u + 7u);
  EXPECT_NO_THROW(s.Validate());
}

TEST(FeatureSchemaTest, SpansTileTheRow) {
  const FeatureSchema s = SmallSchema(3, 4, 2, 5);
  size_t offset = 0;
  for (Category c : kCategories) {
    EXPECT_EQ(s.span(c).offset, offset);
    offset += s.span(c).size;
  }
  EXPECT_EQ(offset, s.width());
  EXPECT_EQ(s.column_names().size(), s.width());
  EXPECT_EQ(*s.column_index("u0"), 0u);
  EXPECT_EQ(*s.column_index("embedding_3"), 6u);
  EXPECT_EQ(*s.column_index("t4"), 13u);
  EXPECT_FALSE(s.column_index("nope").has_value());
}

TEST(FeatureSchemaTest, RejectsBadNames) {
  FeatureSchema s = SmallSchema();
  s.tweet_meta_names.push_back("u1");
  EXPECT_THROW(s.Validate(), ConfigError);
  s = SmallSchema();
  s.temporal_names.push_back("label");
  EXPECT_THROW(s.Validate(), ConfigError);
  s = SmallSchema();
  s.user_meta_names.clear();
  EXPECT_THROW(s.Validate(), ConfigError);
}

TEST(FeatureSchemaTest, HashTracksNames) {
  FeatureSchema a = SmallSchema();
  FeatureSchema b = SmallSchema();
  EXPECT_EQ(a.hash(), b.hash());
  b.temporal_names[0] = "other";
  EXPECT_NE(a.hash(), b.hash());
}

// Two-pass population statistics computed independently of the library.
TEST(NormalizerTest, MatchesTwoPassOracle) {
  Rng rng(7);
  const Dataset ds = RandomDataset(SmallSchema(), 57, rng);
  const NormStats stats = FitNormalizer(ds);
  const ColumnSpan emb = ds.schema.span(Category::kTweetText);
  ASSERT_EQ(stats.columns.size(), ds.schema.width() - emb.size);
  for (size_t k = 0; k < stats.columns.size(); ++k) {
    const size_t j = stats.columns[k];
    EXPECT_FALSE(j >= emb.offset && j < emb.offset + emb.size);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < ds.rows.rows(); ++i) sum += ds.rows(i, static_cast<Eigen::Index>(j));
    const double mean = sum / 57.0;
    double ss = 0.0;
    for (Eigen::Index i = 0; i < ds.rows.rows(); ++i) {
      const double d = ds.rows(i, static_cast<Eigen::Index>(j)) - mean;
      ss += d * d;
    }
    EXPECT_NEAR(stats.means[static_cast<Eigen::Index>(k)], mean, 1e-12);
    EXPECT_NEAR(stats.stds[static_cast<Eigen::Index>(k)], std::sqrt(ss / 57.0), 1e-12);
  }
  const Dataset norm = ApplyNormalizer(stats, ds);
  for (size_t j : stats.columns) {
    const auto col = norm.rows.col(static_cast<Eigen::Index>(j));
    EXPECT_NEAR(col.mean(), 0.0, 1e-12);
    EXPECT_NEAR(std::sqrt((col.array() - col.mean()).square().mean()), 1.0, 1e-12);
  }
  // Embedding block untouched.
  EXPECT_EQ(norm.rows.middleCols(static_cast<Eigen::Index>(emb.offset), static_cast<Eigen::Index>(emb.size)),
            ds.rows.middleCols(static_cast<Eigen::Index>(emb.offset), static_cast<Eigen::Index>(emb.size)));
}

TEST(NormalizerTest, ConstantColumnGuard) {
  Rng rng(1);
  Dataset ds = RandomDataset(SmallSchema(), 10, rng);
  ds.rows.col(0).setConstant(5.0);
  const NormStats stats = FitNormalizer(ds);
  EXPECT_EQ(stats.stds[0], 1.0);
  const Dataset norm = ApplyNormalizer(stats, ds);
  EXPECT_TRUE(norm.rows.col(0).isZero(0.0));
}

TEST(NormalizerTest, RowPathMatchesBatchPath) {
  Rng rng(2);
  const Dataset ds = RandomDataset(SmallSchema(), 20, rng);
  const NormStats stats = FitNormalizer(ds);
  const Dataset norm = ApplyNormalizer(stats, ds);
  for (Eigen::Index i = 0; i < ds.rows.rows(); ++i) {
    Vector r = ds.rows.row(i).transpose();
    NormalizeRow(stats, r);
    EXPECT_EQ(r.transpose(), norm.rows.row(i));
  }
}

TEST(NormalizerTest, Errors) {
  Rng rng(3);
  const Dataset ds = RandomDataset(SmallSchema(), 10, rng);
  EXPECT_THROW(FitNormalizer(ds.Subset(std::vector<size_t>{0})), ConfigError);
  const NormStats stats = FitNormalizer(ds);
  Dataset other = RandomDataset(SmallSchema(3, 4, 2, 3), 5, rng);
  EXPECT_THROW(ApplyNormalizer(stats, other), ConfigError);
  Vector wrong(3);
  EXPECT_THROW(NormalizeRow(stats, wrong), DimensionError);
}

TEST(SplitTest, StratifiedDisjointAndDeterministic) {
  Rng rng(4);
  Dataset ds = RandomDataset(SmallSchema(), 0, rng);
  // 37 class-0 rows and 23 class-1 rows.
  ds = RandomDataset(SmallSchema(), 60, rng);
  for (size_t i = 0; i < 60; ++i) (*ds.labels)[i] = i < 37 ? 0 : 1;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    auto [train, test] = SplitDataset(ds, 0.2, seed);
    const auto count = [](const Dataset& d, int c) {
      return std::count(d.labels->begin(), d.labels->end(), c);
    };
    EXPECT_EQ(count(test, 0), 7);  // round(7.4)
    EXPECT_EQ(count(test, 1), 5);  // round(4.6)
    std::set<std::string> ids(train.ids.begin(), train.ids.end());
    for (const auto& id : test.ids) EXPECT_TRUE(ids.insert(id).second);
    EXPECT_EQ(ids.size(), 60u);
    auto again = SplitDataset(ds, 0.2, seed);
    EXPECT_EQ(again.second.ids, test.ids);
  }
  EXPECT_NE(SplitDataset(ds, 0.2, 1).second.ids, SplitDataset(ds, 0.2, 2).second.ids);
}

TEST(SplitTest, ClampsToAtLeastOne) {
  Rng rng(5);
  Dataset ds = RandomDataset(SmallSchema(), 6, rng);
  auto [train, test] = SplitDataset(ds, 0.01, 0);
  EXPECT_EQ(test.size(), 2u);
  auto [train2, test2] = SplitDataset(ds, 0.99, 0);
  EXPECT_EQ(train2.size(), 2u);
  EXPECT_THROW(SplitDataset(ds, 0.0, 0), ConfigError);
  ds.labels.reset();
  EXPECT_THROW(SplitDataset(ds, 0.2, 0), ConfigError);
}

TEST(SyntheticTest, ShapeLabelsAndDeterminism) {
  SyntheticConfig cfg;
  cfg.n_per_class = 50;
  cfg.schema = FeatureSchema::Default(8);
  cfg.seed = 11;
  const Dataset a = GenerateSynthetic(cfg);
  EXPECT_EQ(a.size(), 100u);
  EXPECT_EQ(static_cast<size_t>(a.rows.cols()), cfg.schema.width());
  EXPECT_EQ(std::count(a.labels->begin(), a.labels->end(), 1), 50);
  EXPECT_NO_THROW(a.Validate());
  const Dataset b = GenerateSynthetic(cfg);
  EXPECT_EQ(a.rows, b.rows);
  cfg.seed = 12;
  EXPECT_NE(GenerateSynthetic(cfg).rows, a.rows);
}

TEST(SyntheticTest, SeparationMovesClassMeans) {
  SyntheticConfig cfg;
  cfg.n_per_class = 4000;
  cfg.schema = SmallSchema();
  cfg.class_separation = 0.0;
  const Dataset flat = GenerateSynthetic(cfg);
  cfg.class_separation = 6.0;
  const Dataset sep = GenerateSynthetic(cfg);
  auto mean_gap = [](const Dataset& d) {
    const auto n = static_cast<Eigen::Index>(d.size() / 2);
    return (d.rows.topRows(n).colwise().mean() - d.rows.bottomRows(n).colwise().mean()).norm();
  };
  EXPECT_GT(mean_gap(sep), 5.0 * mean_gap(flat));
}

TEST(SyntheticTest, StructureSeedSharesGeometry) {
  SyntheticConfig a;
  a.n_per_class = 3000;
  a.schema = SmallSchema();
  a.structure_seed = 9;
  a.seed = 1;
  SyntheticConfig b = a;
  b.seed = 2;
  b.marginal_shift = 0.5;
  b.covariance_mix = 0.5;
  const Dataset da = GenerateSynthetic(a);
  const Dataset db = GenerateSynthetic(b);
  const auto n = static_cast<Eigen::Index>(3000);
  const Vector dir_a = (da.rows.bottomRows(n).colwise().mean() - da.rows.topRows(n).colwise().mean()).transpose();
  const Vector dir_b = (db.rows.bottomRows(n).colwise().mean() - db.rows.topRows(n).colwise().mean()).transpose();
  // Same class direction, but shifted marginals.
  EXPECT_GT(dir_a.normalized().dot(dir_b.normalized()), 0.95);
  EXPECT_GT((da.rows.colwise().mean() - db.rows.colwise().mean()).norm(), 0.1);
}

TEST(CsvTest, RoundTripIsExact) {
  TempDir dir("csv");
  Rng rng(6);
  Dataset ds = RandomDataset(SmallSchema(), 13, rng);
  ds.rows(0, 0) = 0.1;
  ds.rows(1, 1) = 1e-300;
  ds.rows(2, 2) = -123456789.123456789;
  const auto path = dir.path() / "d.csv";
  SaveDataset(ds, path);
  EXPECT_TRUE(std::filesystem::exists(SchemaSidecarPath(path)));
  const Dataset back = LoadDataset(path);
  EXPECT_EQ(back.schema, ds.schema);
  EXPECT_EQ(back.rows, ds.rows);
  EXPECT_EQ(back.ids, ds.ids);
  EXPECT_EQ(*back.labels, *ds.labels);
}

TEST(CsvTest, UnlabelledRoundTrip) {
  TempDir dir("csv");
  Rng rng(6);
  const Dataset ds = RandomDataset(SmallSchema(), 4, rng, false);
  SaveDataset(ds, dir.path() / "u.csv");
  const Dataset back = LoadDataset(dir.path() / "u.csv");
  EXPECT_FALSE(back.labels.has_value());
  EXPECT_EQ(back.rows, ds.rows);
}

TEST(CsvTest, ErrorsNameTheProblem) {
  TempDir dir("csv");
  Rng rng(6);
  const Dataset ds = RandomDataset(SmallSchema(), 3, rng);
  const auto path = dir.path() / "d.csv";
  SaveDataset(ds, path);
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  in.close();
  // Third field of the second data row (column u2) becomes garbage.
  std::vector<std::string> fields;
  std::stringstream ss(lines[2]);
  for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
  fields[3] = "oops";
  lines[2].clear();
  for (size_t i = 0; i < fields.size(); ++i) lines[2] += (i ? "," : "") + fields[i];
  {
    std::ofstream out(path);
    for (const auto& l : lines) out << l << "\n";
  }
  try {
    LoadDataset(path);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("u2"), std::string::npos) << msg;
  }
  std::filesystem::remove(SchemaSidecarPath(path));
  EXPECT_THROW(LoadDataset(path), ParseError);
}

TEST(TweetEmbeddingTest, AveragesPerAccount) {
  TempDir dir("emb");
  Rng rng(8);
  Dataset ds = RandomDataset(SmallSchema(3, 2, 2, 2), 2, rng);
  const auto path = dir.path() / "tweets.csv";
  {
    std::ofstream out(path);
    out << "id,embedding_0,embedding_1\n";
    out << "a0,1,2\na1,5,5\na0,3,4\n";
  }
  AttachTweetEmbeddings(ds, path);
  EXPECT_DOUBLE_EQ(ds.rows(0, 3), 2.0);
  EXPECT_DOUBLE_EQ(ds.rows(0, 4), 3.0);
  EXPECT_DOUBLE_EQ(ds.rows(1, 3), 5.0);
  {
    std::ofstream out(path);
    out << "id,embedding_0,embedding_1\n";
    out << "a0,1,2\n";
  }
  EXPECT_THROW(AttachTweetEmbeddings(ds, path), DataError);
}

}  // namespace
}  // namespace botcon
