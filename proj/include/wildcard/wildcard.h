// Copyright 2026 The Wildcard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the wildcard-error library.
 *
 * Every function returns a wc_status. On failure a description is available
 * from wc_last_error() until the next call on the same thread. Objects are
 * opaque handles owned by the caller and released with the matching _free.
 * Strings returned through char** are released with wc_string_free.
 */
#ifndef WILDCARD_WILDCARD_H_
#define WILDCARD_WILDCARD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(WC_BUILDING_LIBRARY)
#define WC_API __attribute__((visibility("default")))
#else
#define WC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  WC_OK = 0,
  WC_ERR_USAGE = 1,  /* invalid argument or configuration */
  WC_ERR_DATA = 2,   /* malformed input, missing prediction, I/O failure */
  WC_ERR_SOLVER = 3, /* optimizer or root finder did not converge */
} wc_status;

typedef struct wc_config wc_config;
typedef struct wc_model wc_model;
typedef struct wc_dataset wc_dataset;
typedef struct wc_wildcard_result wc_wildcard_result;

WC_API const char* wc_last_error(void);
WC_API const char* wc_version(void);
WC_API void wc_string_free(char* s);

/* ---- Run configuration ---- */
/* Scenario preset: "rb-dephasing", "total-error", "gst-leakage", "custom". */
WC_API wc_status wc_config_preset(const char* scenario, wc_config** out);
WC_API wc_status wc_config_from_json(const char* json_text, wc_config** out);
WC_API wc_status wc_config_load(const char* path, wc_config** out);
WC_API wc_status wc_config_set_seed(wc_config* cfg, uint64_t seed);
WC_API wc_status wc_config_set_alpha(wc_config* cfg, double alpha);
WC_API wc_status wc_config_set_objective(wc_config* cfg, const char* objective);
WC_API wc_status wc_config_to_json(const wc_config* cfg, char** out);
WC_API wc_status wc_config_hash(const wc_config* cfg, char** out);
WC_API void wc_config_free(wc_config* cfg);

/* ---- Pipeline stages; each reads and writes files under out_dir ---- */
WC_API wc_status wc_simulate(const wc_config* cfg, const char* out_dir);
WC_API wc_status wc_fit_rb(const wc_config* cfg, const char* out_dir);
WC_API wc_status wc_fit_gst(const wc_config* cfg, const char* out_dir);
WC_API wc_status wc_wildcard(const wc_config* cfg, const char* out_dir);
WC_API wc_status wc_diamond(const wc_config* cfg, const char* out_dir);
WC_API wc_status wc_report(const wc_config* cfg, const char* out_dir);
WC_API wc_status wc_run_all(const wc_config* cfg, const char* out_dir);

/* ---- Models and datasets ---- */
WC_API wc_status wc_model_load(const char* path, wc_model** out);
/* *count receives the outcome count. capacity 0 only queries the count; a
   nonzero capacity below the count is a usage error. */
WC_API wc_status wc_model_predict(const wc_model* model, const char* circuit, double* probs, size_t capacity,
                                  size_t* count);
WC_API void wc_model_free(wc_model* model);

WC_API wc_status wc_dataset_load(const char* path, wc_dataset** out);
WC_API size_t wc_dataset_size(const wc_dataset* data);
WC_API void wc_dataset_free(wc_dataset* data);

/* ---- Wildcard optimization ----
 * family: "per-gate", "tied" or "rb-depth" (tied, final inversion not
 * counted); objective: "l1" or "weighted:<csv>". */
WC_API wc_status wc_wildcard_solve(const wc_model* model, const wc_dataset* data, const char* family,
                                   const char* objective, double alpha, wc_wildcard_result** out);
WC_API size_t wc_wildcard_result_size(const wc_wildcard_result* res);
/* *label stays valid for the lifetime of res. */
WC_API wc_status wc_wildcard_result_get(const wc_wildcard_result* res, size_t index, const char** label,
                                        double* value);
WC_API int wc_wildcard_result_certified(const wc_wildcard_result* res);
WC_API wc_status wc_wildcard_result_to_json(const wc_wildcard_result* res, char** out);
WC_API void wc_wildcard_result_free(wc_wildcard_result* res);

/* ---- Numeric kernels ---- */
WC_API wc_status wc_tvd(const double* p, const double* q, size_t n, double* out);
WC_API wc_status wc_llr(const double* f, const double* q, size_t n, double shots, double* out);
WC_API wc_status wc_chi2_quantile(int dof, double confidence, double* out);
WC_API wc_status wc_min_llr_in_ball(const double* f, const double* p, size_t n, double radius, double shots,
                                    double* out);
WC_API wc_status wc_min_tvd_budget(const double* f, const double* p, size_t n, double shots, double threshold,
                                   double* out);
/* Pauli probability vectors (p_I, p_X, p_Y, p_Z). */
WC_API wc_status wc_diamond_pauli(const double* a, const double* b, double* out);
/* Row-major d^2 x d^2 PTMs in the normalized Pauli (d = 2) or Gell-Mann (d = 3) basis. */
WC_API wc_status wc_diamond_numeric(const double* ptm1, const double* ptm2, int dim, int restarts, double* out);

#ifdef __cplusplus
}
#endif

#endif /* WILDCARD_WILDCARD_H_ */
