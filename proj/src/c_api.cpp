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

#include <algorithm>
#include <new>
#include <optional>
#include <string>

#include "jndopt/assign.hpp"
#include "jndopt/error.hpp"
#include "jndopt/harness.hpp"
#include "jndopt/image.hpp"
#include "jndopt/jnd.hpp"
#include "jndopt/loss.hpp"
#include "jndopt/metrics.hpp"

struct jndopt_image {
  jndopt::ImageRgb image;
};

struct jndopt_jnd_map {
  jndopt::JndMap map;
};

struct jndopt_assign_report {
  jndopt::AssignReport report;
  jndopt_image xhat;
};

namespace {

thread_local std::string g_last_error;

jndopt_status StatusFor(jndopt::ErrorCode code) {
  switch (code) {
    case jndopt::ErrorCode::kIo:
      return JNDOPT_ERR_IO;
    case jndopt::ErrorCode::kFormat:
      return JNDOPT_ERR_FORMAT;
    case jndopt::ErrorCode::kShapeMismatch:
      return JNDOPT_ERR_SHAPE;
    case jndopt::ErrorCode::kDomain:
      return JNDOPT_ERR_DOMAIN;
    case jndopt::ErrorCode::kEmptyGroup:
      return JNDOPT_ERR_EMPTY_GROUP;
  }
  return JNDOPT_ERR_INTERNAL;
}

// Runs `fn`, translating exceptions into a status and the thread's last
// error message.
template <typename Fn>
jndopt_status Guard(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const jndopt::Error& e) {
    g_last_error = e.what();
    return StatusFor(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return JNDOPT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return JNDOPT_ERR_INTERNAL;
  }
}

jndopt_status InvalidArgument(const char* message) {
  g_last_error = message;
  return JNDOPT_ERR_INVALID_ARGUMENT;
}

jndopt::AdjustorSpec ToSpec(jndopt_adjustor adjustor) {
  return adjustor.fixed_value > 0.0
             ? jndopt::AdjustorSpec::Fixed(adjustor.fixed_value)
             : jndopt::AdjustorSpec::DistortionAware();
}

jndopt::RunConfig ToRunConfig(const jndopt_run_config* c) {
  jndopt::RunConfig config;
  config.weights =
      jndopt::ChannelWeights(c->weights[0], c->weights[1], c->weights[2]);
  config.t_floor = c->t_floor;
  config.adjustor = ToSpec(c->adjustor);
  config.seed = c->seed;
  config.jobs = c->jobs;
  config.Validate();
  return config;
}

std::optional<std::filesystem::path> OptionalPath(const char* p) {
  if (p == nullptr || *p == '\0') return std::nullopt;
  return std::filesystem::path(p);
}

}  // namespace

extern "C" {

const char* jndopt_version(void) { return "1.0.0"; }

const char* jndopt_last_error(void) { return g_last_error.c_str(); }

const char* jndopt_status_name(jndopt_status status) {
  switch (status) {
    case JNDOPT_OK:
      return "ok";
    case JNDOPT_ERR_IO:
      return "io error";
    case JNDOPT_ERR_FORMAT:
      return "format error";
    case JNDOPT_ERR_SHAPE:
      return "shape mismatch";
    case JNDOPT_ERR_DOMAIN:
      return "domain error";
    case JNDOPT_ERR_EMPTY_GROUP:
      return "empty group";
    case JNDOPT_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case JNDOPT_ERR_PARTIAL:
      return "partial failure";
    case JNDOPT_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown";
}

jndopt_status jndopt_image_create(int height, int width, const double* values,
                                  jndopt_image** out) {
  if (!values || !out) return InvalidArgument("null argument");
  return Guard([&] {
    if (height < 1 || width < 1) {
      jndopt::Fail(jndopt::ErrorCode::kDomain, "image dimensions must be positive");
    }
    const std::size_t n = static_cast<std::size_t>(height) * width * 3;
    *out = new jndopt_image{
        jndopt::ImageRgb(height, width, std::vector<double>(values, values + n))};
    return JNDOPT_OK;
  });
}

jndopt_status jndopt_image_load_png(const char* path, jndopt_image** out) {
  if (!path || !out) return InvalidArgument("null argument");
  return Guard([&] {
    *out = new jndopt_image{jndopt::LoadPng(path)};
    return JNDOPT_OK;
  });
}

jndopt_status jndopt_image_save_png(const jndopt_image* image,
                                    const char* path) {
  if (!image || !path) return InvalidArgument("null argument");
  return Guard([&] {
    jndopt::SavePng(image->image, path);
    return JNDOPT_OK;
  });
}

void jndopt_image_free(jndopt_image* image) { delete image; }

int jndopt_image_height(const jndopt_image* image) {
  return image ? image->image.height() : 0;
}

int jndopt_image_width(const jndopt_image* image) {
  return image ? image->image.width() : 0;
}

const double* jndopt_image_values(const jndopt_image* image) {
  return image ? image->image.values().data() : nullptr;
}

jndopt_status jndopt_jnd_classical(const jndopt_image* image,
                                   const double weights[3], double t_floor,
                                   jndopt_jnd_map** out) {
  if (!image || !weights || !out) return InvalidArgument("null argument");
  return Guard([&] {
    const jndopt::ChannelWeights w(weights[0], weights[1], weights[2]);
    *out = new jndopt_jnd_map{jndopt::ComputeJndMap(image->image, w, t_floor)};
    return JNDOPT_OK;
  });
}

jndopt_status jndopt_jnd_load(const char* path, int height, int width,
                              double t_floor, jndopt_jnd_map** out) {
  if (!path || !out) return InvalidArgument("null argument");
  return Guard([&] {
    *out = new jndopt_jnd_map{
        jndopt::LoadJndMap(path, {height, width, 3}, t_floor)};
    return JNDOPT_OK;
  });
}

jndopt_status jndopt_jnd_save(const jndopt_jnd_map* map, const char* path) {
  if (!map || !path) return InvalidArgument("null argument");
  return Guard([&] {
    jndopt::SaveJndMap(map->map, path);
    return JNDOPT_OK;
  });
}

void jndopt_jnd_free(jndopt_jnd_map* map) { delete map; }

int jndopt_jnd_height(const jndopt_jnd_map* map) {
  return map ? map->map.height() : 0;
}

int jndopt_jnd_width(const jndopt_jnd_map* map) {
  return map ? map->map.width() : 0;
}

const float* jndopt_jnd_values(const jndopt_jnd_map* map) {
  return map ? map->map.thresholds().data() : nullptr;
}

jndopt_status jndopt_jnd_loss(const jndopt_image* x, const jndopt_image* xhat,
                              const jndopt_jnd_map* jnd,
                              jndopt_adjustor adjustor,
                              jndopt_loss_result* result, double* per_pixel,
                              double* gradient) {
  if (!x || !xhat || !jnd || !result) return InvalidArgument("null argument");
  return Guard([&] {
    const jndopt::LossReport report =
        jndopt::JndLoss(x->image, xhat->image, jnd->map, ToSpec(adjustor));
    result->total = report.total;
    result->alpha = report.adjustor.alpha;
    result->ratio = report.adjustor.ratio;
    if (per_pixel) {
      std::copy(report.per_pixel.values.begin(), report.per_pixel.values.end(),
                per_pixel);
    }
    if (gradient) {
      std::copy(report.gradient.values.begin(), report.gradient.values.end(),
                gradient);
    }
    return JNDOPT_OK;
  });
}

jndopt_status jndopt_psnr(const jndopt_image* x, const jndopt_image* xhat,
                          jndopt_channel channel, double* out_db) {
  if (!x || !xhat || !out_db) return InvalidArgument("null argument");
  if (channel < JNDOPT_CHANNEL_ALL || channel > JNDOPT_CHANNEL_B) {
    return InvalidArgument("unknown channel");
  }
  return Guard([&] {
    std::optional<jndopt::Channel> c;
    if (channel != JNDOPT_CHANNEL_ALL) c = static_cast<jndopt::Channel>(channel);
    *out_db = jndopt::Psnr(x->image, xhat->image, c);
    return JNDOPT_OK;
  });
}

jndopt_status jndopt_pspnr(const jndopt_image* x, const jndopt_image* xhat,
                           const jndopt_jnd_map* jnd, jndopt_adjustor adjustor,
                           double* out_db) {
  if (!x || !xhat || !jnd || !out_db) return InvalidArgument("null argument");
  return Guard([&] {
    *out_db = jndopt::Pspnr(x->image, xhat->image, jnd->map, ToSpec(adjustor));
    return JNDOPT_OK;
  });
}

jndopt_status jndopt_evaluate_pair(const jndopt_image* x,
                                   const jndopt_image* xhat,
                                   const jndopt_jnd_map* jnd,
                                   jndopt_adjustor adjustor,
                                   uint64_t compressed_bytes,
                                   jndopt_metrics* out) {
  if (!x || !xhat || !jnd || !out) return InvalidArgument("null argument");
  return Guard([&] {
    const jndopt::MetricsRecord r = jndopt::EvaluatePair(
        x->image, xhat->image, jnd->map, ToSpec(adjustor), compressed_bytes);
    *out = {r.bpp,    r.psnr,  r.psnr_r,     r.psnr_g,
            r.psnr_b, r.pspnr, r.loss_total, r.alpha};
    return JNDOPT_OK;
  });
}

jndopt_assign_config jndopt_assign_config_default(void) {
  const jndopt::AssignConfig d;
  return {d.target_mse, d.max_iters, d.step_size, d.seed, {0.0}};
}

jndopt_status jndopt_assign(const jndopt_image* x, const jndopt_jnd_map* jnd,
                            const jndopt_assign_config* config,
                            jndopt_assign_report** out) {
  if (!x || !jnd || !config || !out) return InvalidArgument("null argument");
  return Guard([&] {
    jndopt::AssignConfig c;
    c.target_mse = config->target_mse;
    c.max_iters = config->max_iters;
    c.step_size = config->step_size;
    c.seed = config->seed;
    c.adjustor = ToSpec(config->adjustor);
    jndopt::AssignReport report = jndopt::AssignDistortion(x->image, jnd->map, c);
    jndopt_image xhat{report.xhat};
    *out = new jndopt_assign_report{std::move(report), std::move(xhat)};
    return JNDOPT_OK;
  });
}

void jndopt_assign_report_free(jndopt_assign_report* report) { delete report; }

const jndopt_image* jndopt_assign_report_image(
    const jndopt_assign_report* report) {
  return report ? &report->xhat : nullptr;
}

size_t jndopt_assign_report_trajectory_size(
    const jndopt_assign_report* report) {
  return report ? report->report.trajectory.size() : 0;
}

jndopt_status jndopt_assign_report_trajectory_point(
    const jndopt_assign_report* report, size_t index,
    jndopt_trajectory_point* out) {
  if (!report || !out) return InvalidArgument("null argument");
  if (index >= report->report.trajectory.size()) {
    return InvalidArgument("trajectory index out of range");
  }
  const jndopt::TrajectoryPoint& p = report->report.trajectory[index];
  *out = {p.iteration, p.loss_total, p.alpha, p.mse};
  return JNDOPT_OK;
}

jndopt_region_stats jndopt_assign_report_region_stats(
    const jndopt_assign_report* report) {
  jndopt_region_stats out{};
  if (!report) return out;
  const jndopt::RegionStats& s = report->report.region_stats;
  for (int q = 0; q < 4; ++q) out.quartile_mean_abs[q] = s.quartile_mean_abs[q];
  for (int c = 0; c < 3; ++c) out.channel_mean_abs[c] = s.channel_mean_abs[c];
  out.concentration_ratio = s.concentration_ratio;
  return out;
}

jndopt_status jndopt_inject_noise(const jndopt_image* x,
                                  const jndopt_jnd_map* jnd, double k,
                                  uint64_t seed, jndopt_image** out) {
  if (!x || !jnd || !out) return InvalidArgument("null argument");
  return Guard([&] {
    *out = new jndopt_image{jndopt::InjectJndNoise(x->image, jnd->map, k, seed)};
    return JNDOPT_OK;
  });
}

jndopt_run_config jndopt_run_config_default(void) {
  const jndopt::RunConfig d;
  return {{d.weights.r(), d.weights.g(), d.weights.b()},
          d.t_floor,
          {0.0},
          d.seed,
          d.jobs};
}

jndopt_status jndopt_cmd_jnd(const jndopt_run_config* config, const char* input,
                             const char* output, const char* visualization) {
  if (!config || !input || !output) return InvalidArgument("null argument");
  return Guard([&] {
    jndopt::RunJnd(ToRunConfig(config),
                   {input, output, OptionalPath(visualization)});
    return JNDOPT_OK;
  });
}

jndopt_status jndopt_cmd_eval(const jndopt_run_config* config,
                              const char* manifest, const char* output_csv,
                              const char* curves_csv, const char* jnd_dir) {
  if (!config || !manifest || !output_csv) {
    return InvalidArgument("null argument");
  }
  return Guard([&] {
    const jndopt::EvalOutcome outcome = jndopt::RunEval(
        ToRunConfig(config), {manifest, output_csv, OptionalPath(curves_csv),
                              OptionalPath(jnd_dir)});
    if (outcome.failures.empty()) return JNDOPT_OK;
    std::string message = std::to_string(outcome.failures.size()) +
                          " pair(s) failed:";
    for (const std::string& f : outcome.failures) message += "\n  " + f;
    g_last_error = message;
    return JNDOPT_ERR_PARTIAL;
  });
}

jndopt_status jndopt_cmd_assign(const jndopt_run_config* config,
                                const char* input, const char* out_dir,
                                double target_mse, int iters,
                                double step_size) {
  if (!config || !input || !out_dir) return InvalidArgument("null argument");
  return Guard([&] {
    jndopt::RunAssign(ToRunConfig(config),
                      {input, out_dir, target_mse, iters, step_size});
    return JNDOPT_OK;
  });
}

jndopt_status jndopt_cmd_inject(const jndopt_run_config* config,
                                const char* input, const char* out_dir,
                                double k) {
  if (!config || !input || !out_dir) return InvalidArgument("null argument");
  return Guard([&] {
    jndopt::RunInject(ToRunConfig(config), {input, out_dir, k});
    return JNDOPT_OK;
  });
}

}  // extern "C"
