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

#include "jndopt/jndopt.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

namespace {

namespace fs = std::filesystem;

std::vector<double> Gradient(int h, int w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(20.0, 230.0);
  std::vector<double> v(static_cast<std::size_t>(h) * w * 3);
  for (double& x : v) x = u(rng);
  return v;
}

struct Image {
  jndopt_image* p = nullptr;
  ~Image() { jndopt_image_free(p); }
};
struct Map {
  jndopt_jnd_map* p = nullptr;
  ~Map() { jndopt_jnd_free(p); }
};

fs::path Scratch(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() /
                     ("jndopt_capi_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STREQ(jndopt_version(), "1.0.0");
  EXPECT_STREQ(jndopt_status_name(JNDOPT_OK), "ok");
  EXPECT_STRNE(jndopt_status_name(JNDOPT_ERR_DOMAIN), "");
}

TEST(CApi, ImageValidation) {
  Image img;
  const double bad[3] = {0.0, 256.0, 1.0};
  EXPECT_EQ(jndopt_image_create(1, 1, bad, &img.p), JNDOPT_ERR_DOMAIN);
  EXPECT_EQ(img.p, nullptr);
  EXPECT_NE(std::string(jndopt_last_error()), "");
  EXPECT_EQ(jndopt_image_create(1, 1, nullptr, &img.p), JNDOPT_ERR_INVALID_ARGUMENT);
  const double ok[3] = {1.0, 2.0, 3.0};
  ASSERT_EQ(jndopt_image_create(1, 1, ok, &img.p), JNDOPT_OK);
  EXPECT_EQ(jndopt_image_height(img.p), 1);
  EXPECT_EQ(jndopt_image_values(img.p)[2], 3.0);
}

TEST(CApi, LossMetricsAndErrors) {
  const int h = 8, w = 8;
  Image x, y;
  ASSERT_EQ(jndopt_image_create(h, w, Gradient(h, w, 1).data(), &x.p), JNDOPT_OK);
  ASSERT_EQ(jndopt_image_create(h, w, Gradient(h, w, 2).data(), &y.p), JNDOPT_OK);
  Map j;
  const double weights[3] = {1.4, 1.0, 2.2};
  ASSERT_EQ(jndopt_jnd_classical(x.p, weights, 0.1, &j.p), JNDOPT_OK);
  EXPECT_EQ(jndopt_jnd_height(j.p), h);

  jndopt_loss_result r{};
  std::vector<double> per(h * w * 3), grad(h * w * 3);
  ASSERT_EQ(jndopt_jnd_loss(x.p, y.p, j.p, {0.0}, &r, per.data(), grad.data()),
            JNDOPT_OK);
  double mean = 0.0;
  for (double v : per) mean += v;
  EXPECT_NEAR(mean / per.size(), r.total, 1e-9 * r.total);
  EXPECT_GE(r.alpha, 1.0);

  double psnr = 0.0, pspnr = 0.0;
  ASSERT_EQ(jndopt_psnr(x.p, y.p, JNDOPT_CHANNEL_ALL, &psnr), JNDOPT_OK);
  ASSERT_EQ(jndopt_pspnr(x.p, y.p, j.p, {0.0}, &pspnr), JNDOPT_OK);
  EXPECT_NEAR(pspnr, 10.0 * std::log10(255.0 * 255.0 / r.total), 1e-9);
  EXPECT_GE(pspnr, psnr);

  jndopt_metrics m{};
  ASSERT_EQ(jndopt_evaluate_pair(x.p, y.p, j.p, {0.0}, 24, &m), JNDOPT_OK);
  EXPECT_DOUBLE_EQ(m.bpp, 24.0 * 8 / 64);
  EXPECT_DOUBLE_EQ(m.psnr, psnr);

  Image small;
  const double px[3] = {1, 1, 1};
  ASSERT_EQ(jndopt_image_create(1, 1, px, &small.p), JNDOPT_OK);
  EXPECT_EQ(jndopt_psnr(x.p, small.p, JNDOPT_CHANNEL_R, &psnr), JNDOPT_ERR_SHAPE);
  EXPECT_EQ(jndopt_jnd_loss(x.p, y.p, j.p, {0.0}, nullptr, nullptr, nullptr),
            JNDOPT_ERR_INVALID_ARGUMENT);
}

TEST(CApi, FilesRoundTrip) {
  const fs::path dir = Scratch("files");
  Image x;
  std::vector<double> v = Gradient(5, 7, 3);
  for (double& e : v) e = std::round(e);
  ASSERT_EQ(jndopt_image_create(5, 7, v.data(), &x.p), JNDOPT_OK);
  const std::string png = (dir / "x.png").string();
  ASSERT_EQ(jndopt_image_save_png(x.p, png.c_str()), JNDOPT_OK);
  Image back;
  ASSERT_EQ(jndopt_image_load_png(png.c_str(), &back.p), JNDOPT_OK);
  EXPECT_EQ(std::memcmp(jndopt_image_values(back.p), v.data(),
                        v.size() * sizeof(double)),
            0);
  Image none;
  EXPECT_EQ(jndopt_image_load_png((dir / "none.png").c_str(), &none.p),
            JNDOPT_ERR_IO);

  Map j, j2, wrong;
  const double weights[3] = {1.4, 1.0, 2.2};
  ASSERT_EQ(jndopt_jnd_classical(x.p, weights, 0.1, &j.p), JNDOPT_OK);
  const std::string map = (dir / "x.jndm").string();
  ASSERT_EQ(jndopt_jnd_save(j.p, map.c_str()), JNDOPT_OK);
  ASSERT_EQ(jndopt_jnd_load(map.c_str(), 5, 7, 0.1, &j2.p), JNDOPT_OK);
  EXPECT_EQ(std::memcmp(jndopt_jnd_values(j.p), jndopt_jnd_values(j2.p),
                        5 * 7 * 3 * sizeof(float)),
            0);
  EXPECT_EQ(jndopt_jnd_load(map.c_str(), 7, 5, 0.1, &wrong.p), JNDOPT_ERR_SHAPE);
  fs::remove_all(dir);
}

TEST(CApi, AssignAndInject) {
  const int h = 24, w = 24;
  Image x;
  ASSERT_EQ(jndopt_image_create(h, w, Gradient(h, w, 4).data(), &x.p), JNDOPT_OK);
  Map j;
  const double weights[3] = {1.4, 1.0, 2.2};
  ASSERT_EQ(jndopt_jnd_classical(x.p, weights, 0.1, &j.p), JNDOPT_OK);

  jndopt_assign_config cfg = jndopt_assign_config_default();
  EXPECT_EQ(cfg.target_mse, 25.0);
  EXPECT_EQ(cfg.max_iters, 500);
  cfg.max_iters = 60;
  jndopt_assign_report* report = nullptr;
  ASSERT_EQ(jndopt_assign(x.p, j.p, &cfg, &report), JNDOPT_OK);
  const std::size_t n = jndopt_assign_report_trajectory_size(report);
  ASSERT_GT(n, 1u);
  jndopt_trajectory_point first{}, last{};
  ASSERT_EQ(jndopt_assign_report_trajectory_point(report, 0, &first), JNDOPT_OK);
  ASSERT_EQ(jndopt_assign_report_trajectory_point(report, n - 1, &last), JNDOPT_OK);
  EXPECT_EQ(first.iteration, 0);
  EXPECT_LE(last.loss_total, first.loss_total);
  EXPECT_EQ(jndopt_assign_report_trajectory_point(report, n, &last),
            JNDOPT_ERR_INVALID_ARGUMENT);
  const jndopt_image* xhat = jndopt_assign_report_image(report);
  EXPECT_EQ(jndopt_image_width(xhat), w);
  const jndopt_region_stats s = jndopt_assign_report_region_stats(report);
  EXPECT_GE(s.concentration_ratio, 0.0);
  jndopt_assign_report_free(report);

  cfg.target_mse = -1.0;
  report = nullptr;
  EXPECT_EQ(jndopt_assign(x.p, j.p, &cfg, &report), JNDOPT_ERR_DOMAIN);
  EXPECT_EQ(report, nullptr);

  Image a, b;
  ASSERT_EQ(jndopt_inject_noise(x.p, j.p, 1.0, 9, &a.p), JNDOPT_OK);
  ASSERT_EQ(jndopt_inject_noise(x.p, j.p, 1.0, 9, &b.p), JNDOPT_OK);
  EXPECT_EQ(std::memcmp(jndopt_image_values(a.p), jndopt_image_values(b.p),
                        h * w * 3 * sizeof(double)),
            0);
  double pspnr = 0.0;
  ASSERT_EQ(jndopt_pspnr(x.p, a.p, j.p, {1.0}, &pspnr), JNDOPT_OK);
  EXPECT_EQ(pspnr, 100.0);
  EXPECT_EQ(jndopt_inject_noise(x.p, j.p, 0.0, 9, &b.p), JNDOPT_ERR_DOMAIN);
}

TEST(CApi, RunConfigValidation) {
  jndopt_run_config cfg = jndopt_run_config_default();
  EXPECT_EQ(cfg.jobs, 1);
  EXPECT_EQ(cfg.weights[0], 1.4);
  cfg.jobs = 0;
  EXPECT_EQ(jndopt_cmd_jnd(&cfg, "/nonexistent.png", "/tmp/x.jndm", nullptr),
            JNDOPT_ERR_DOMAIN);
  cfg = jndopt_run_config_default();
  cfg.weights[1] = 3.0;  // green must be the most sensitive channel
  EXPECT_EQ(jndopt_cmd_jnd(&cfg, "/nonexistent.png", "/tmp/x.jndm", nullptr),
            JNDOPT_ERR_DOMAIN);
  cfg = jndopt_run_config_default();
  EXPECT_EQ(jndopt_cmd_jnd(&cfg, "/nonexistent.png", "/tmp/x.jndm", nullptr),
            JNDOPT_ERR_IO);
}

}  // namespace
