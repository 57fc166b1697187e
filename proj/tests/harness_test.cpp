// Copyright (c) the jndopt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <functional>

#include "json.hpp"
#include <sstream>

#include "jndopt/error.hpp"
#include "jndopt/harness.hpp"
#include "test_support.hpp"

namespace jndopt {
namespace {

namespace fs = std::filesystem;
using testing::ReadBytes;
using testing::TempDir;
using testing::WriteBytes;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIo;
}

int CountLines(const std::string& s) {
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

// originals/<name>.png plus a reconstruction per label under <label>/<name>.png.
struct Corpus {
  explicit Corpus(int images) : dir("corpus") {
    fs::create_directories(dir / "originals");
    fs::create_directories(dir / "base");
    fs::create_directories(dir / "ours");
    std::string manifest = "original,reconstruction,bytes,label\n";
    for (int i = 0; i < images; ++i) {
      const std::string name = "kodim" + std::to_string(i + 1) + ".png";
      const ImageRgb x = testing::NaturalImage(24, 32, 100 + i);
      SavePng(x, dir / ("originals/" + name));
      SavePng(testing::NaturalImage(24, 32, 200 + i), dir / ("base/" + name));
      SavePng(InjectJndNoise(x, ComputeJndMap(x), 1.5, i), dir / ("ours/" + name));
      manifest += "originals/" + name + ",base/" + name + "," +
                  std::to_string(300 + 10 * i) + ",base\n";
      manifest += "originals/" + name + ",ours/" + name + "," +
                  std::to_string(250 + 10 * i) + ",ours\n";
    }
    WriteBytes(dir / "manifest.csv", manifest);
  }
  TempDir dir;
};

TEST(Manifest, ParsesRelativeToItsDirectory) {
  TempDir dir("manifest");
  WriteBytes(dir / "m.csv",
             "original,reconstruction,bytes,label\n"
             "a/x.png,b/x.png,4608,baseline\n"
             "\n"
             "a/y.png,\"c/y.png\",0,\"ours, v2\"\n");
  const auto entries = ReadManifest(dir / "m.csv");
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].original, dir.path() / "a/x.png");
  EXPECT_EQ(entries[0].bytes, 4608u);
  EXPECT_EQ(entries[0].label, "baseline");
  EXPECT_EQ(entries[1].reconstruction, dir.path() / "c/y.png");
  EXPECT_EQ(entries[1].label, "ours, v2");
}

TEST(Manifest, Errors) {
  TempDir dir("manifest_err");
  EXPECT_EQ(CodeOf([&] { ReadManifest(dir / "missing.csv"); }), ErrorCode::kIo);
  WriteBytes(dir / "empty.csv", "");
  EXPECT_EQ(CodeOf([&] { ReadManifest(dir / "empty.csv"); }), ErrorCode::kFormat);
  WriteBytes(dir / "header.csv", "orig,recon,bytes,label\n");
  EXPECT_EQ(CodeOf([&] { ReadManifest(dir / "header.csv"); }), ErrorCode::kFormat);
  WriteBytes(dir / "fields.csv", "original,reconstruction,bytes,label\na,b,1\n");
  EXPECT_EQ(CodeOf([&] { ReadManifest(dir / "fields.csv"); }), ErrorCode::kFormat);
  for (const char* bad : {"-1", "1.5", "x", ""}) {
    WriteBytes(dir / "bytes.csv", std::string("original,reconstruction,bytes,label\n"
                                              "a,b,") + bad + ",l\n");
    EXPECT_EQ(CodeOf([&] { ReadManifest(dir / "bytes.csv"); }), ErrorCode::kFormat)
        << bad;
  }
}

TEST(RunConfig, Validation) {
  RunConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.jobs = 0;
  EXPECT_EQ(CodeOf([&] { c.Validate(); }), ErrorCode::kDomain);
  c = {};
  c.t_floor = 0.0;
  EXPECT_EQ(CodeOf([&] { c.Validate(); }), ErrorCode::kDomain);
}

TEST(Eval, IdentityPairRow) {
  TempDir dir("identity");
  fs::create_directories(dir / "rec");
  const ImageRgb x = testing::NaturalImage(16, 16, 3);
  SavePng(x, dir / "img.png");
  SavePng(x, dir / "rec/img.png");
  WriteBytes(dir / "m.csv",
             "original,reconstruction,bytes,label\nimg.png,rec/img.png,0,id\n");
  const EvalOutcome out =
      RunEval(RunConfig{}, {dir / "m.csv", dir / "out.csv", {}, {}});
  ASSERT_EQ(out.rows.size(), 2u);
  EXPECT_TRUE(out.failures.empty());
  const std::string csv = ReadBytes(dir / "out.csv");
  EXPECT_EQ(csv,
            std::string(kMetricsCsvHeader) +
                "\n"
                "id,img,0.000000,100.000000,100.000000,100.000000,100.000000,"
                "100.000000,0.000000,1.000000\n"
                "id,mean,0.000000,100.000000,100.000000,100.000000,100.000000,"
                "100.000000,0.000000,1.000000\n");
}

TEST(Eval, RowCountsAndCurves) {
  Corpus corpus(6);
  const EvalOutcome out =
      RunEval(RunConfig{}, {corpus.dir / "manifest.csv", corpus.dir / "m.csv",
                            corpus.dir / "curves.csv", {}});
  EXPECT_TRUE(out.failures.empty());
  ASSERT_EQ(out.rows.size(), 12u + 2u);
  EXPECT_EQ(out.rows[0].label, "base");
  EXPECT_EQ(out.rows[1].label, "ours");
  EXPECT_EQ(out.rows[0].image, "kodim1");
  EXPECT_EQ(out.rows[12].image, "mean");
  EXPECT_EQ(out.rows[12].label, "base");
  EXPECT_EQ(out.rows[13].label, "ours");
  EXPECT_EQ(CountLines(ReadBytes(corpus.dir / "m.csv")), 15);
  // Noise within 1.5 JND scores far better perceptually than an unrelated image.
  EXPECT_GT(out.rows[13].record.pspnr, out.rows[12].record.pspnr + 10.0);
  EXPECT_DOUBLE_EQ(out.rows[0].record.bpp, Bpp(300, 24, 32));

  const std::string curves = ReadBytes(corpus.dir / "curves.csv");
  EXPECT_EQ(curves.rfind("label,metric,bpp,value\n", 0), 0u);
  EXPECT_EQ(CountLines(curves), 1 + 12 * 5);  // five metrics per distinct bpp
}

TEST(Eval, PartialFailuresSkipRows) {
  Corpus corpus(2);
  std::string manifest = ReadBytes(corpus.dir / "manifest.csv");
  manifest += "originals/kodim1.png,base/missing.png,10,base\n";
  manifest += "originals/kodim1.png,ours/kodim2.png,10,ours\n";  // stem mismatch
  WriteBytes(corpus.dir / "manifest.csv", manifest);
  const EvalOutcome out = RunEval(
      RunConfig{}, {corpus.dir / "manifest.csv", corpus.dir / "m.csv", {}, {}});
  EXPECT_EQ(out.failures.size(), 2u);
  EXPECT_EQ(out.rows.size(), 4u + 2u);
}

TEST(Eval, JobsDoNotChangeOutput) {
  Corpus corpus(5);
  std::string reference;
  for (int jobs : {1, 2, 3, 8, 1}) {
    RunConfig cfg;
    cfg.jobs = jobs;
    RunEval(cfg, {corpus.dir / "manifest.csv", corpus.dir / "m.csv",
                  corpus.dir / "c.csv", {}});
    const std::string bytes =
        ReadBytes(corpus.dir / "m.csv") + ReadBytes(corpus.dir / "c.csv");
    if (reference.empty()) reference = bytes;
    EXPECT_EQ(bytes, reference) << "jobs " << jobs;
  }
}

TEST(Eval, PrecomputedJndMaps) {
  Corpus corpus(2);
  fs::create_directories(corpus.dir / "maps");
  for (int i = 1; i <= 2; ++i) {
    const std::string stem = "kodim" + std::to_string(i);
    SaveJndMap(JndMap(24, 32, std::vector<float>(24 * 32 * 3, 1000.0f)),
               corpus.dir / ("maps/" + stem + ".jndm"));
  }
  RunConfig cfg;
  cfg.adjustor = AdjustorSpec::Fixed(1.0);
  const EvalOutcome out = RunEval(cfg, {corpus.dir / "manifest.csv",
                                        corpus.dir / "m.csv", {},
                                        corpus.dir / "maps"});
  ASSERT_EQ(out.rows.size(), 6u);
  for (const EvalRow& row : out.rows) EXPECT_EQ(row.record.pspnr, kDbCap);

  fs::remove(corpus.dir / "maps/kodim2.jndm");
  const EvalOutcome partial = RunEval(cfg, {corpus.dir / "manifest.csv",
                                            corpus.dir / "m.csv", {},
                                            corpus.dir / "maps"});
  EXPECT_EQ(partial.failures.size(), 2u);
}

TEST(JndCommand, FlatGrayMapAndVisualization) {
  TempDir dir("jndcmd");
  SavePng(ImageRgb::Filled(12, 12, 127, 127, 127), dir / "gray.png");
  RunJnd(RunConfig{}, {dir / "gray.png", dir / "gray.jndm", dir / "vis.png"});
  const JndMap map = LoadJndMap(dir / "gray.jndm", Shape{12, 12, 3});
  const ChannelWeights w;
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(map.at(6, 6, c), 3.0 * w[c], 1e-5);
  const ImageRgb vis = LoadPng(dir / "vis.png");
  for (int h = 0; h < 12; ++h) {
    for (int w2 = 0; w2 < 12; ++w2) {
      EXPECT_EQ(vis.at(h, w2, 0), vis.at(0, 0, 0));
      EXPECT_EQ(vis.at(h, w2, 2), 255.0);
    }
  }

  RunConfig ones;
  ones.weights = ChannelWeights(1.0, 1.0, 1.0);
  SavePng(testing::NaturalImage(12, 12, 4), dir / "nat.png");
  RunJnd(ones, {dir / "nat.png", dir / "nat.jndm", {}});
  const JndMap flat = LoadJndMap(dir / "nat.jndm", Shape{12, 12, 3});
  for (int h = 0; h < 12; ++h) {
    for (int w2 = 0; w2 < 12; ++w2) {
      EXPECT_EQ(flat.at(h, w2, 0), flat.at(h, w2, 1));
      EXPECT_EQ(flat.at(h, w2, 0), flat.at(h, w2, 2));
    }
  }
  EXPECT_EQ(CodeOf([&] {
              RunJnd(RunConfig{}, {dir / "none.png", dir / "x.jndm", {}});
            }),
            ErrorCode::kIo);
}

TEST(AssignCommand, ArtifactsAndDeterminism) {
  TempDir dir("assigncmd");
  SavePng(testing::TwoRegionImage(32), dir / "in.png");
  RunConfig cfg;
  cfg.seed = 5;
  cfg.adjustor = AdjustorSpec::Fixed(10.0);
  std::string first;
  for (const char* sub : {"a", "b"}) {
    RunAssign(cfg, {dir / "in.png", dir / sub, 25.0, 40, 0.5});
    const fs::path out = dir / sub;
    const std::string bytes = ReadBytes(out / "assigned.png") +
                              ReadBytes(out / "trajectory.json") +
                              ReadBytes(out / "region_stats.json");
    if (first.empty()) first = bytes;
    EXPECT_EQ(bytes, first);
  }
  const auto traj = nlohmann::json::parse(ReadBytes(dir / "a/trajectory.json"));
  ASSERT_FALSE(traj["trajectory"].empty());
  for (const auto& p : traj["trajectory"]) EXPECT_EQ(p["alpha"].get<double>(), 10.0);
  const auto stats = nlohmann::json::parse(ReadBytes(dir / "a/region_stats.json"));
  EXPECT_EQ(stats["quartile_mean_abs"].size(), 4u);
  EXPECT_TRUE(stats.contains("concentration_ratio"));
}

TEST(AssignCommand, TinyBudgetOnTextureIsLossless) {
  TempDir dir("assign_tiny");
  SavePng(testing::TwoRegionImage(32), dir / "in.png");
  const AssignReport r =
      RunAssign(RunConfig{}, {dir / "in.png", dir / "out", 1.0, 500, 0.5});
  EXPECT_LT(r.trajectory.back().loss_total, 1e-12);
}

TEST(InjectCommand, MetricsJson) {
  TempDir dir("injectcmd");
  SavePng(testing::NaturalImage(32, 48, 8), dir / "in.png");
  RunInject(RunConfig{}, {dir / "in.png", dir / "k1", 1.0});
  RunInject(RunConfig{}, {dir / "in.png", dir / "k10", 10.0});
  RunInject(RunConfig{}, {dir / "in.png", dir / "k10b", 10.0});
  const auto k1 = nlohmann::json::parse(ReadBytes(dir / "k1/metrics.json"));
  const auto k10 = nlohmann::json::parse(ReadBytes(dir / "k10/metrics.json"));
  EXPECT_EQ(k1["pspnr"].get<double>(), kDbCap);
  EXPECT_LT(k10["psnr"].get<double>(), k1["psnr"].get<double>());
  EXPECT_EQ(ReadBytes(dir / "k10/metrics.json"), ReadBytes(dir / "k10b/metrics.json"));
  EXPECT_EQ(ReadBytes(dir / "k10/injected.png"), ReadBytes(dir / "k10b/injected.png"));
}

TEST(Formatting, FixedAndLossJson) {
  EXPECT_EQ(FormatFixed(-0.0), "0.000000");
  EXPECT_EQ(FormatFixed(-1e-9), "0.000000");
  EXPECT_EQ(FormatFixed(100.0), "100.000000");
  LossReport r;
  r.total = 0.5;
  r.adjustor = {2.0, 2.0};
  const auto j = nlohmann::json::parse(LossReportJson(r));
  EXPECT_EQ(j["total"].get<double>(), 0.5);
}

}  // namespace
}  // namespace jndopt
