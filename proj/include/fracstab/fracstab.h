/*
* Copyright (C) 2026 fracstab contributors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#ifndef FRACSTAB_H
#define FRACSTAB_H

/*
 * C interface of libfracstab.
 *
 * Every fallible call returns an fs_status. On failure a thread-local
 * message is available from fs_last_error_message() until the next call on
 * the same thread. Objects are opaque handles released with the matching
 * *_free function; free functions accept NULL.
 *
 * Functions that produce text take (buf, cap, len): the text length without
 * the terminating NUL is stored in *len, and FS_ERR_BUFFER_TOO_SMALL is
 * returned when cap <= *len (buf may be NULL to query the size).
 *
 * All handles are immutable after creation and may be shared across threads.
 */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(FRACSTAB_BUILDING)
#    define FRACSTAB_API __declspec(dllexport)
#  else
#    define FRACSTAB_API __declspec(dllimport)
#  endif
#else
#  define FRACSTAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fs_status {
    FS_OK = 0,
    FS_ERR_DOMAIN = 1,
    FS_ERR_GRID = 2,
    FS_ERR_CONTRACT = 3,
    FS_ERR_DIVERGENCE = 4,
    FS_ERR_SOLVER = 5,
    FS_ERR_NO_ENDEMIC = 6,
    FS_ERR_PARSE = 7,
    FS_ERR_BUFFER_TOO_SMALL = 8,
    FS_ERR_NULL_ARGUMENT = 9,
    FS_ERR_INTERNAL = 10
} fs_status;

FRACSTAB_API const char* fs_version(void);
FRACSTAB_API const char* fs_status_name(fs_status status);
FRACSTAB_API const char* fs_last_error_message(void);
/* Node index attached to the last divergence or sample-domain error, or
 * (size_t)-1 when none. */
FRACSTAB_API size_t fs_last_error_node(void);

/* ---- parameter records ------------------------------------------------ */

typedef enum fs_incidence { FS_INCIDENCE_STANDARD = 0, FS_INCIDENCE_MASS_ACTION = 1 } fs_incidence;

typedef struct fs_sica_params {
    double lambda_;
    double mu;
    double beta;
    double rho;
    double phi;
    double alpha_t;
    double omega;
    double d;
    fs_incidence incidence;
} fs_sica_params;

typedef struct fs_teiv_params {
    double lambda;
    double mu_T;
    double mu_E;
    double mu_I;
    double mu_V;
    double rho;
    double gamma;
    double k;
    double beta;
    double alpha1;
    double alpha2;
    double alpha3;
} fs_teiv_params;

/* Baseline SICA record (R0 = 0.29, standard incidence). */
FRACSTAB_API void fs_sica_params_baseline(fs_sica_params* out);
FRACSTAB_API fs_status fs_sica_params_from_json(const char* json, fs_sica_params* out);
FRACSTAB_API fs_status fs_sica_params_to_json(const fs_sica_params* p, char* buf, size_t cap, size_t* len);
FRACSTAB_API fs_status fs_teiv_params_from_json(const char* json, fs_teiv_params* out);
FRACSTAB_API fs_status fs_teiv_params_to_json(const fs_teiv_params* p, char* buf, size_t cap, size_t* len);

/* ---- discrete fractional calculus ------------------------------------- */

FRACSTAB_API fs_status fs_gamma(double x, double* out);
/* out has n_nodes entries; out[0] copies out[1]. */
FRACSTAB_API fs_status fs_l1_caputo(const double* values, size_t n_nodes, double t0, double h, double alpha,
                                    double* out);
/* out has count + 1 entries. */
FRACSTAB_API fs_status fs_gl_weights(double alpha, size_t count, double* out);
/* predictor has step_index entries, corrector step_index + 1. */
FRACSTAB_API fs_status fs_abm_weights(double alpha, size_t step_index, double h, double* predictor,
                                      double* corrector);

/* ---- models ----------------------------------------------------------- */

typedef struct fs_model fs_model;
typedef void (*fs_rhs_fn)(const double* state, double* out, size_t dimension, void* user_data);

FRACSTAB_API fs_status fs_model_sica(const fs_sica_params* p, fs_model** out);
FRACSTAB_API fs_status fs_model_teiv(const fs_teiv_params* p, fs_model** out);
/* user_data must outlive the model; fn must be pure and thread-safe. */
FRACSTAB_API fs_status fs_model_custom(size_t dimension, fs_rhs_fn fn, void* user_data, const char* name,
                                       fs_model** out);
FRACSTAB_API void fs_model_free(fs_model* m);
FRACSTAB_API size_t fs_model_dimension(const fs_model* m);
FRACSTAB_API const char* fs_model_name(const fs_model* m);
FRACSTAB_API const char* fs_model_state_label(const fs_model* m, size_t i);
FRACSTAB_API fs_status fs_model_rhs(const fs_model* m, const double* state, double* out);

FRACSTAB_API fs_status fs_sica_r0(const fs_sica_params* p, double* out);
FRACSTAB_API fs_status fs_sica_threshold_r0(const fs_sica_params* p, double* out);
FRACSTAB_API fs_status fs_sica_disease_free(const fs_sica_params* p, double out[4]);
FRACSTAB_API fs_status fs_sica_endemic(const fs_sica_params* p, double out[4]);
FRACSTAB_API fs_status fs_sica_dfe_spectral_abscissa(const fs_sica_params* p, double* out);

FRACSTAB_API fs_status fs_teiv_incidence(const fs_teiv_params* p, double T, double V, double* out);
FRACSTAB_API fs_status fs_teiv_r0(const fs_teiv_params* p, double* out);
/* out holds up to 2 equilibria (8 doubles); *count receives 1 or 2. */
FRACSTAB_API fs_status fs_teiv_equilibria(const fs_teiv_params* p, double out[8], size_t* count);
FRACSTAB_API fs_status fs_teiv_ife_spectral_abscissa(const fs_teiv_params* p, double* out);

/* ---- solvers ---------------------------------------------------------- */

typedef enum fs_method { FS_METHOD_ABM = 0, FS_METHOD_GL = 1, FS_METHOD_RK4 = 2 } fs_method;

typedef struct fs_trajectory fs_trajectory;

/* memory_window = 0 selects full memory. RK4 requires alpha = 1 and ignores memory_window. */
FRACSTAB_API fs_status fs_solve(const fs_model* m, fs_method method, double alpha, const double* x0, double t0,
                                double h, size_t n_steps, size_t memory_window, fs_trajectory** out);
FRACSTAB_API void fs_trajectory_free(fs_trajectory* t);
FRACSTAB_API size_t fs_trajectory_nodes(const fs_trajectory* t);
FRACSTAB_API size_t fs_trajectory_dimension(const fs_trajectory* t);
FRACSTAB_API double fs_trajectory_order(const fs_trajectory* t);
FRACSTAB_API void fs_trajectory_grid(const fs_trajectory* t, double* t0, double* h, size_t* n_steps);
FRACSTAB_API fs_status fs_trajectory_state(const fs_trajectory* t, size_t node, double* out);
FRACSTAB_API fs_status fs_trajectory_component(const fs_trajectory* t, size_t component, double* out);
/* Count of (node, component) entries below -1e-8 * trajectory scale. */
FRACSTAB_API size_t fs_trajectory_undershoot_count(const fs_trajectory* t);

/* ---- Lyapunov functionals and certificates ---------------------------- */

typedef struct fs_functional fs_functional;

FRACSTAB_API fs_status fs_functional_sica_v0(const fs_sica_params* p, fs_functional** out);
FRACSTAB_API fs_status fs_functional_sica_v1(const fs_sica_params* p, fs_functional** out);
FRACSTAB_API fs_status fs_functional_teiv(const fs_teiv_params* p, const double anchor[4], fs_functional** out);
FRACSTAB_API fs_status fs_functional_log_volterra(const double* weights, const double* anchors, size_t n,
                                                  fs_functional** out);
FRACSTAB_API void fs_functional_free(fs_functional* f);
FRACSTAB_API const char* fs_functional_label(const fs_functional* f);
FRACSTAB_API fs_status fs_functional_eval(const fs_functional* f, const double* state, size_t dimension,
                                          double* out);
FRACSTAB_API fs_status fs_functional_field_derivative(const fs_functional* f, const fs_model* m,
                                                      const double* state, double* out);
/* out has fs_trajectory_nodes(t) entries. */
FRACSTAB_API fs_status fs_functional_values(const fs_functional* f, const fs_trajectory* t, double* out);
FRACSTAB_API fs_status fs_functional_caputo(const fs_functional* f, const fs_trajectory* t, double* out);

/* g labels: "s", "s2", "log1p", "s/(1+s)". */
FRACSTAB_API fs_status fs_psi(const char* g_label, double xstar, double x, double* out);

typedef enum fs_certificate_kind { FS_CERT_LEMMA_INEQUALITY = 0, FS_CERT_DECRESCENCE = 1 } fs_certificate_kind;

typedef struct fs_certificate {
    fs_certificate_kind kind;
    double max_violation;
    double tolerance;
    int pass;
    int has_violating_node;
    size_t violating_node;
    double t0;
    double h;
    size_t n_steps;
    int has_order;
    double order;
} fs_certificate;

FRACSTAB_API double fs_default_tolerance(double h, double alpha, double scale);
/* tolerance may be NULL for the default 10 h^{2-alpha} max|x|. */
FRACSTAB_API fs_status fs_lemma_certificate(const double* x, size_t n_nodes, double t0, double h,
                                            const char* g_label, double xbar, double alpha,
                                            const double* tolerance, fs_certificate* out);
/* order may be NULL; it is only recorded in the report. */
FRACSTAB_API fs_status fs_decrescence_certificate(const double* values, size_t n_nodes, double t0, double h,
                                                  double tolerance, const double* order, fs_certificate* out);
FRACSTAB_API fs_status fs_certificate_to_json(const fs_certificate* c, char* buf, size_t cap, size_t* len);

#ifdef __cplusplus
}
#endif

#endif /* FRACSTAB_H */
