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

/* C interface to the jndopt library. All handles are opaque and owned by the
 * caller once returned; release them with the matching *_free function.
 * Functions return JNDOPT_OK on success. On failure a message for the calling
 * thread is available from jndopt_last_error(). */

#ifndef JNDOPT_JNDOPT_H_
#define JNDOPT_JNDOPT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define JNDOPT_API __declspec(dllexport)
#else
#define JNDOPT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum jndopt_status {
  JNDOPT_OK = 0,
  JNDOPT_ERR_IO = 1,
  JNDOPT_ERR_FORMAT = 2,
  JNDOPT_ERR_SHAPE = 3,
  JNDOPT_ERR_DOMAIN = 4,
  JNDOPT_ERR_EMPTY_GROUP = 5,
  JNDOPT_ERR_INVALID_ARGUMENT = 6,
  /* Some manifest entries failed; the rest were written. */
  JNDOPT_ERR_PARTIAL = 7,
  JNDOPT_ERR_INTERNAL = 8
} jndopt_status;

typedef struct jndopt_image jndopt_image;
typedef struct jndopt_jnd_map jndopt_jnd_map;
typedef struct jndopt_assign_report jndopt_assign_report;

typedef enum jndopt_channel {
  JNDOPT_CHANNEL_ALL = -1,
  JNDOPT_CHANNEL_R = 0,
  JNDOPT_CHANNEL_G = 1,
  JNDOPT_CHANNEL_B = 2
} jndopt_channel;

/* fixed_value <= 0 selects the distortion-aware adjustor. */
typedef struct jndopt_adjustor {
  double fixed_value;
} jndopt_adjustor;

typedef struct jndopt_loss_result {
  double total;
  double alpha;
  double ratio;
} jndopt_loss_result;

typedef struct jndopt_metrics {
  double bpp;
  double psnr;
  double psnr_r;
  double psnr_g;
  double psnr_b;
  double pspnr;
  double loss_total;
  double alpha;
} jndopt_metrics;

typedef struct jndopt_assign_config {
  double target_mse;
  int max_iters;
  double step_size;
  uint64_t seed;
  jndopt_adjustor adjustor;
} jndopt_assign_config;

typedef struct jndopt_trajectory_point {
  int iteration;
  double loss_total;
  double alpha;
  double mse;
} jndopt_trajectory_point;

typedef struct jndopt_region_stats {
  double quartile_mean_abs[4];
  double channel_mean_abs[3];
  double concentration_ratio;
} jndopt_region_stats;

typedef struct jndopt_run_config {
  double weights[3]; /* R, G, B */
  double t_floor;
  jndopt_adjustor adjustor;
  uint64_t seed;
  int jobs;
} jndopt_run_config;

JNDOPT_API const char* jndopt_version(void);
JNDOPT_API const char* jndopt_last_error(void);
JNDOPT_API const char* jndopt_status_name(jndopt_status status);

/* Images: h*w*3 doubles in [0,255], row-major (h, w, c). */
JNDOPT_API jndopt_status jndopt_image_create(int height, int width,
                                             const double* values,
                                             jndopt_image** out);
JNDOPT_API jndopt_status jndopt_image_load_png(const char* path,
                                               jndopt_image** out);
JNDOPT_API jndopt_status jndopt_image_save_png(const jndopt_image* image,
                                               const char* path);
JNDOPT_API void jndopt_image_free(jndopt_image* image);
JNDOPT_API int jndopt_image_height(const jndopt_image* image);
JNDOPT_API int jndopt_image_width(const jndopt_image* image);
JNDOPT_API const double* jndopt_image_values(const jndopt_image* image);

/* JND maps: h*w*3 floats. */
JNDOPT_API jndopt_status jndopt_jnd_classical(const jndopt_image* image,
                                              const double weights[3],
                                              double t_floor,
                                              jndopt_jnd_map** out);
JNDOPT_API jndopt_status jndopt_jnd_load(const char* path, int height,
                                         int width, double t_floor,
                                         jndopt_jnd_map** out);
JNDOPT_API jndopt_status jndopt_jnd_save(const jndopt_jnd_map* map,
                                         const char* path);
JNDOPT_API void jndopt_jnd_free(jndopt_jnd_map* map);
JNDOPT_API int jndopt_jnd_height(const jndopt_jnd_map* map);
JNDOPT_API int jndopt_jnd_width(const jndopt_jnd_map* map);
JNDOPT_API const float* jndopt_jnd_values(const jndopt_jnd_map* map);

/* per_pixel and gradient may be NULL; otherwise they hold h*w*3 doubles. */
JNDOPT_API jndopt_status jndopt_jnd_loss(const jndopt_image* x,
                                         const jndopt_image* xhat,
                                         const jndopt_jnd_map* jnd,
                                         jndopt_adjustor adjustor,
                                         jndopt_loss_result* result,
                                         double* per_pixel, double* gradient);
JNDOPT_API jndopt_status jndopt_psnr(const jndopt_image* x,
                                     const jndopt_image* xhat,
                                     jndopt_channel channel, double* out_db);
JNDOPT_API jndopt_status jndopt_pspnr(const jndopt_image* x,
                                      const jndopt_image* xhat,
                                      const jndopt_jnd_map* jnd,
                                      jndopt_adjustor adjustor,
                                      double* out_db);
JNDOPT_API jndopt_status jndopt_evaluate_pair(const jndopt_image* x,
                                              const jndopt_image* xhat,
                                              const jndopt_jnd_map* jnd,
                                              jndopt_adjustor adjustor,
                                              uint64_t compressed_bytes,
                                              jndopt_metrics* out);

JNDOPT_API jndopt_assign_config jndopt_assign_config_default(void);
JNDOPT_API jndopt_status jndopt_assign(const jndopt_image* x,
                                       const jndopt_jnd_map* jnd,
                                       const jndopt_assign_config* config,
                                       jndopt_assign_report** out);
JNDOPT_API void jndopt_assign_report_free(jndopt_assign_report* report);
/* Borrowed; valid until the report is freed. */
JNDOPT_API const jndopt_image* jndopt_assign_report_image(
    const jndopt_assign_report* report);
JNDOPT_API size_t jndopt_assign_report_trajectory_size(
    const jndopt_assign_report* report);
JNDOPT_API jndopt_status jndopt_assign_report_trajectory_point(
    const jndopt_assign_report* report, size_t index,
    jndopt_trajectory_point* out);
JNDOPT_API jndopt_region_stats jndopt_assign_report_region_stats(
    const jndopt_assign_report* report);

JNDOPT_API jndopt_status jndopt_inject_noise(const jndopt_image* x,
                                             const jndopt_jnd_map* jnd,
                                             double k, uint64_t seed,
                                             jndopt_image** out);

/* Batch commands backing the CLI. Optional paths may be NULL. */
JNDOPT_API jndopt_run_config jndopt_run_config_default(void);
JNDOPT_API jndopt_status jndopt_cmd_jnd(const jndopt_run_config* config,
                                        const char* input, const char* output,
                                        const char* visualization);
JNDOPT_API jndopt_status jndopt_cmd_eval(const jndopt_run_config* config,
                                         const char* manifest,
                                         const char* output_csv,
                                         const char* curves_csv,
                                         const char* jnd_dir);
JNDOPT_API jndopt_status jndopt_cmd_assign(const jndopt_run_config* config,
                                           const char* input,
                                           const char* out_dir,
                                           double target_mse, int iters,
                                           double step_size);
JNDOPT_API jndopt_status jndopt_cmd_inject(const jndopt_run_config* config,
                                           const char* input,
                                           const char* out_dir, double k);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  /* JNDOPT_JNDOPT_H_ */
