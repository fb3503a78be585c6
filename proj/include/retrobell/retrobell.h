/* Copyright 2026 The retrobell Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to libretrobell.
 *
 * Every fallible call returns an rb_status and writes results through out
 * pointers. On failure, rb_last_error() returns a message describing the most
 * recent error on the calling thread. All angles are in radians.
 *
 * Handles (rb_model, rb_sampler) are opaque and owned by the caller; release
 * them with the matching _destroy function. A model handle is immutable and
 * may be shared between threads. A sampler handle carries its own random
 * stream and must not be used from two threads at once.
 */

#ifndef RETROBELL_RETROBELL_H
#define RETROBELL_RETROBELL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RB_API __declspec(dllexport)
#else
#define RB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rb_status {
    RB_OK = 0,
    RB_ERR_INVALID_ARGUMENT = 1,
    RB_ERR_NULL_POINTER = 2,
    /* The operation needs a symmetric model (epsilon == 0). */
    RB_ERR_UNSUPPORTED_MODEL = 3,
    RB_ERR_BUDGET_EXCEEDED = 4,
    RB_ERR_INTERNAL = 5
} rb_status;

typedef enum rb_outcome {
    RB_AB = 0,
    RB_A_BBAR = 1,
    RB_ABAR_B = 2,
    RB_ABAR_BBAR = 3
} rb_outcome;

typedef struct rb_model rb_model;
typedef struct rb_sampler rb_sampler;

typedef struct rb_distribution {
    double alice_angle;
    double bob_angle;
    double theta; /* bob - alice, reduced to (-pi, pi] */
    double p[4];  /* indexed by rb_outcome */
} rb_distribution;

typedef struct rb_chsh_settings {
    double a1, a2, b1, b2;
} rb_chsh_settings;

typedef struct rb_chsh_result {
    double s_value;
    double correlations[4]; /* E(a1,b1), E(a1,b2), E(a2,b1), E(a2,b2) */
    rb_chsh_settings settings;
} rb_chsh_result;

typedef struct rb_sweep_row {
    double gamma;
    double s_numeric;
    double s_closed;
    double deviation_from_tsirelson;
} rb_sweep_row;

typedef struct rb_audit_result {
    double max_deviation;
    double worst_bob_angle;
} rb_audit_result;

typedef struct rb_history {
    double lambda;
    double alpha;
    double beta;
    int64_t winding;
    rb_outcome outcome;
} rb_history;

typedef struct rb_empirical {
    uint64_t counts[4];
    uint64_t n_samples;
    double frequencies[4];
    double std_errors[4];
    uint64_t seed;
} rb_empirical;

RB_API const char* rb_version(void);
RB_API const char* rb_status_string(rb_status status);
RB_API const char* rb_last_error(void);
RB_API const char* rb_outcome_name(rb_outcome outcome);

/* Models */
RB_API rb_status rb_model_create(double gamma, double epsilon, rb_model** out);
RB_API void rb_model_destroy(rb_model* model);
RB_API rb_status rb_model_params(const rb_model* model, double* gamma, double* epsilon);

/* Weights */
RB_API rb_status rb_anomaly_weight(const rb_model* model, double alpha, double* out);
RB_API rb_status rb_history_weight(const rb_model* model, double alpha, double beta, double* out);
RB_API rb_status rb_net_rotation_weight(const rb_model* model, double delta, double* out);
RB_API rb_status rb_periodic_weight_series(double delta, double width, uint64_t n_max, double* out);
RB_API rb_status rb_periodic_weight_closed(double delta, double width, double* out);
RB_API rb_status rb_single_particle_ratio(const rb_model* model, double theta, double* out);

/* Two-particle model */
RB_API rb_status rb_required_net_rotation(rb_outcome pair, double theta, double* out);
RB_API rb_status rb_joint_weight(const rb_model* model, rb_outcome pair, double theta, double* out);
RB_API rb_status rb_joint_distribution(const rb_model* model, double alice_angle, double bob_angle,
                                       rb_distribution* out);
RB_API rb_status rb_separable_distribution(const rb_model* model, double alice_angle,
                                           double bob_angle, double source_angle,
                                           rb_distribution* out);
RB_API rb_status rb_correlation(const rb_distribution* dist, double* out);
RB_API rb_status rb_alice_marginal(const rb_distribution* dist, double* out);
RB_API rb_status rb_bob_marginal(const rb_distribution* dist, double* out);
/* out[0] = |J_AB - J_AbarBbar|, out[1] = |J_AbarB - J_ABbar| */
RB_API rb_status rb_symmetry_residuals(const rb_model* model, double alice_angle, double bob_angle,
                                       double out[2]);

/* Bell analysis */
RB_API rb_chsh_settings rb_chsh_default_settings(void);
RB_API rb_status rb_chsh(const rb_model* model, const rb_chsh_settings* settings,
                         rb_chsh_result* out);
RB_API rb_status rb_s_closed_form(double gamma, double* out);
/* max_evaluations == 0 selects the library default budget. */
RB_API rb_status rb_grid_search(const rb_model* model, const rb_chsh_settings* base,
                                double half_range, uint32_t steps, uint32_t workers,
                                uint64_t max_evaluations, double* max_s, rb_chsh_settings* argmax);
/* rows must hold n_gammas entries; settings may be NULL for the defaults. */
RB_API rb_status rb_gamma_sweep(const double* gammas, size_t n_gammas,
                                const rb_chsh_settings* settings, rb_sweep_row* rows);
RB_API rb_status rb_signaling_audit(const rb_model* model, double alice_angle,
                                    const double* bob_grid, size_t n_grid, rb_audit_result* out);
RB_API rb_status rb_separable_signaling_audit(const rb_model* model, double alice_angle,
                                              const double* bob_grid, size_t n_grid,
                                              double source_angle, rb_audit_result* out);

/* Sampling (symmetric models only) */
RB_API rb_status rb_sampler_create(const rb_model* model, double alice_angle, double bob_angle,
                                   uint64_t seed, rb_sampler** out);
RB_API rb_status rb_sampler_next(rb_sampler* sampler, rb_history* out);
RB_API void rb_sampler_destroy(rb_sampler* sampler);
RB_API rb_status rb_estimate_distribution(const rb_model* model, double alice_angle,
                                          double bob_angle, uint64_t n_samples, uint64_t seed,
                                          uint32_t workers, rb_empirical* out);
RB_API rb_status rb_anomaly_concentration(const rb_model* model, double alice_angle,
                                          double bob_angle, uint64_t n_samples, uint64_t seed,
                                          double k, uint32_t workers, double* fraction);

#ifdef __cplusplus
}
#endif

#endif /* RETROBELL_RETROBELL_H */
