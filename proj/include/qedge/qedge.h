// Copyright 2026 The qedge Authors
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


/* Stable C interface to the qedge core. Strings returned through char**
 * are owned by the caller and released with qe_free_string. Handles are
 * opaque and not safe to destroy while another thread uses them; reading
 * from one handle on several threads is fine. */

#ifndef QEDGE_QEDGE_H_
#define QEDGE_QEDGE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QE_API __declspec(dllexport)
#else
#define QE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qe_status {
  QE_OK = 0,
  QE_ERR_INVALID_ARGUMENT = 1, /* includes config validation failures */
  QE_ERR_DOMAIN = 2,
  QE_ERR_NUMERIC = 3,
  QE_ERR_RESOURCE = 4,
  QE_ERR_MISMATCH = 5, /* replay produced different bytes */
  QE_ERR_INTERNAL = 6
} qe_status;

/* Last failure on the calling thread; empty after a successful call. */
QE_API const char* qe_last_error(void);
/* Same, as {"error": {"type", "field"?, "message"}}. */
QE_API const char* qe_last_error_json(void);
/* Process exit code the CLI uses for the last failure. */
QE_API int qe_last_exit_code(void);
QE_API const char* qe_version(void);
QE_API void qe_free_string(char* s);

/* ---- scenario configs ---- */
typedef struct qe_config qe_config;

QE_API qe_status qe_config_create(qe_config** out);
QE_API qe_status qe_config_load(const char* path, qe_config** out);
/* key: scenario, preset, out, seed, threads, or a params key. */
QE_API qe_status qe_config_set(qe_config* c, const char* key, const char* value);
QE_API qe_status qe_config_validate(const qe_config* c);
QE_API qe_status qe_config_canonical(const qe_config* c, char** ini_text);
QE_API void qe_config_destroy(qe_config* c);

/* Writes artifacts and manifest.json; returns the manifest path. */
QE_API qe_status qe_run(const qe_config* c, char** manifest_path);

typedef struct qe_figure_options {
  const char* out; /* NULL: $QEDGE_OUT_DIR or ./qedge_out */
  uint64_t seed;
  unsigned threads;
  int batches;
  int realizations;
  int quick;
} qe_figure_options;

QE_API void qe_figure_options_default(qe_figure_options* o);
/* JSON array of the manifest paths written. */
QE_API qe_status qe_reproduce(const char* figure_id, const qe_figure_options* o, char** manifests_json);
/* QE_ERR_MISMATCH when any artifact hash differs; report is JSON. */
QE_API qe_status qe_replay(const char* manifest_path, const char* out_dir, char** report_json);

/* Newline-separated lists. */
QE_API qe_status qe_list_figures(char** ids);
QE_API qe_status qe_list_scenarios(char** ids);
QE_API qe_status qe_list_presets(const char* scenario, char** ids);
QE_API qe_status qe_param_keys(char** keys);
/* {"csv": {...}, "json": {...}} */
QE_API qe_status qe_schemas(char** json);

/* ---- analytic edge (optionally with one strong level) ---- */
typedef struct qe_edge qe_edge;

QE_API qe_status qe_edge_create(double w, double ebar0, double v, double gamma, qe_edge** out);
QE_API qe_status qe_edge_create_spoiler(double w, double ebar0, double v, double gamma, double e_s, double v_s,
                                        qe_edge** out);
QE_API qe_status qe_edge_psi0(const qe_edge* h, double t, double* re, double* im);
QE_API qe_status qe_edge_psiE(const qe_edge* h, double e, double t, double* re, double* im);
QE_API qe_status qe_edge_rho0_infinity(const qe_edge* h, double* rho);
QE_API qe_status qe_edge_rho_stationary(const qe_edge* h, double e, double* rho);
QE_API qe_status qe_edge_pole_count(const qe_edge* h, size_t* n);
QE_API qe_status qe_edge_pole(const qe_edge* h, size_t k, double* re, double* im);
QE_API void qe_edge_destroy(qe_edge* h);

/* ---- scattering solve ---- */
typedef struct qe_scatter qe_scatter;

QE_API qe_status qe_scatter_solve(double w, double e_o, double alpha, const double* e_s, const double* v_s,
                                  size_t n_spoilers, int absorption, qe_scatter** out);
QE_API qe_status qe_scatter_absorbed(const qe_scatter* h, double* a);
QE_API qe_status qe_scatter_edge_w50(const qe_scatter* h, double* w50);
QE_API qe_status qe_scatter_size(const qe_scatter* h, size_t* n);
/* Fills up to n samples of eps and |psi|^2. */
QE_API qe_status qe_scatter_profile(const qe_scatter* h, double* eps, double* abs2, size_t n);
QE_API void qe_scatter_destroy(qe_scatter* h);

QE_API qe_status qe_wkb_transfer(double w, double e_o, double alpha, double* probability);

/* Normalized tractable-model profile rho(E)/rho(0) on an ascending grid. */
QE_API qe_status qe_tractable_profile(double w, double u, double ebar_o, const double* e, size_t n,
                                      double* rho_normalized, double* half_width);

#ifdef __cplusplus
}
#endif

#endif /* QEDGE_QEDGE_H_ */
