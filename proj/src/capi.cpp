// Copyright 2026 The retrobell Authors
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

#include "retrobell/retrobell.h"

#include <algorithm>
#include <new>
#include <span>
#include <string>

#include "retrobell/bell.hpp"
#include "retrobell/entangle.hpp"
#include "retrobell/sampler.hpp"
#include "retrobell/weight.hpp"

#ifndef RETROBELL_VERSION
#define RETROBELL_VERSION "0.0.0"
#endif

struct rb_model {
    retrobell::WeightModel model;
};

struct rb_sampler {
    retrobell::HistorySampler sampler;
    retrobell::RandomStream rng;
};

namespace {

thread_local std::string last_error;

rb_status fail(rb_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

template <typename Fn>
rb_status guarded(Fn&& fn) {
    try {
        fn();
        last_error.clear();
        return RB_OK;
    } catch (const retrobell::BudgetExceeded& e) {
        return fail(RB_ERR_BUDGET_EXCEEDED, e.what());
    } catch (const retrobell::UnsupportedModel& e) {
        return fail(RB_ERR_UNSUPPORTED_MODEL, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(RB_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(RB_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(RB_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(RB_ERR_INTERNAL, "unknown error");
    }
}

template <typename... Ptrs>
bool any_null(const Ptrs*... ptrs) {
    return ((ptrs == nullptr) || ...);
}

rb_status null_pointer() { return fail(RB_ERR_NULL_POINTER, "null pointer argument"); }

retrobell::Outcome to_outcome(rb_outcome o) {
    if (o < RB_AB || o > RB_ABAR_BBAR) {
        throw std::invalid_argument("unknown outcome " + std::to_string(static_cast<int>(o)));
    }
    return static_cast<retrobell::Outcome>(o);
}

retrobell::ChshSettings to_settings(const rb_chsh_settings& s) { return {s.a1, s.a2, s.b1, s.b2}; }
rb_chsh_settings from_settings(const retrobell::ChshSettings& s) { return {s.a1, s.a2, s.b1, s.b2}; }

retrobell::JointDistribution to_distribution(const rb_distribution& d) {
    retrobell::JointDistribution out;
    std::copy(std::begin(d.p), std::end(d.p), out.p.begin());
    out.theta = d.theta;
    return out;
}

void fill_distribution(const retrobell::JointDistribution& d, const retrobell::SettingsPair& s,
                       rb_distribution* out) {
    out->alice_angle = s.alice();
    out->bob_angle = s.bob();
    out->theta = s.theta();
    std::copy(d.p.begin(), d.p.end(), out->p);
}

}  // namespace

extern "C" {

const char* rb_version(void) { return RETROBELL_VERSION; }

const char* rb_status_string(rb_status status) {
    switch (status) {
        case RB_OK: return "ok";
        case RB_ERR_INVALID_ARGUMENT: return "invalid argument";
        case RB_ERR_NULL_POINTER: return "null pointer";
        case RB_ERR_UNSUPPORTED_MODEL: return "operation requires epsilon = 0";
        case RB_ERR_BUDGET_EXCEEDED: return "evaluation budget exceeded";
        case RB_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* rb_last_error(void) { return last_error.c_str(); }

const char* rb_outcome_name(rb_outcome outcome) {
    if (outcome < RB_AB || outcome > RB_ABAR_BBAR) {
        return "?";
    }
    return retrobell::outcome_name(static_cast<retrobell::Outcome>(outcome)).data();
}

rb_status rb_model_create(double gamma, double epsilon, rb_model** out) {
    if (out == nullptr) return null_pointer();
    *out = nullptr;
    return guarded([&] { *out = new rb_model{retrobell::WeightModel(gamma, epsilon)}; });
}

void rb_model_destroy(rb_model* model) { delete model; }

rb_status rb_model_params(const rb_model* model, double* gamma, double* epsilon) {
    if (any_null(model, gamma, epsilon)) return null_pointer();
    *gamma = model->model.gamma();
    *epsilon = model->model.epsilon();
    return RB_OK;
}

rb_status rb_anomaly_weight(const rb_model* model, double alpha, double* out) {
    if (any_null(model, out)) return null_pointer();
    return guarded([&] { *out = retrobell::anomaly_weight(alpha, model->model); });
}

rb_status rb_history_weight(const rb_model* model, double alpha, double beta, double* out) {
    if (any_null(model, out)) return null_pointer();
    return guarded([&] { *out = retrobell::history_weight(alpha, beta, model->model); });
}

rb_status rb_net_rotation_weight(const rb_model* model, double delta, double* out) {
    if (any_null(model, out)) return null_pointer();
    return guarded([&] { *out = retrobell::net_rotation_weight(delta, model->model); });
}

rb_status rb_periodic_weight_series(double delta, double width, uint64_t n_max, double* out) {
    if (out == nullptr) return null_pointer();
    return guarded([&] {
        if (!(width > 0.0)) throw std::invalid_argument("width must be positive");
        *out = retrobell::periodic_weight_series(delta, width, n_max);
    });
}

rb_status rb_periodic_weight_closed(double delta, double width, double* out) {
    if (out == nullptr) return null_pointer();
    return guarded([&] { *out = retrobell::periodic_weight_closed(delta, width); });
}

rb_status rb_single_particle_ratio(const rb_model* model, double theta, double* out) {
    if (any_null(model, out)) return null_pointer();
    return guarded([&] { *out = retrobell::single_particle_outcome_ratio(theta, model->model); });
}

rb_status rb_required_net_rotation(rb_outcome pair, double theta, double* out) {
    if (out == nullptr) return null_pointer();
    return guarded([&] { *out = retrobell::required_net_rotation(to_outcome(pair), theta); });
}

rb_status rb_joint_weight(const rb_model* model, rb_outcome pair, double theta, double* out) {
    if (any_null(model, out)) return null_pointer();
    return guarded([&] { *out = retrobell::joint_weight(to_outcome(pair), theta, model->model); });
}

rb_status rb_joint_distribution(const rb_model* model, double alice_angle, double bob_angle,
                                rb_distribution* out) {
    if (any_null(model, out)) return null_pointer();
    return guarded([&] {
        const retrobell::SettingsPair s(alice_angle, bob_angle);
        fill_distribution(retrobell::joint_distribution(s, model->model), s, out);
    });
}

rb_status rb_separable_distribution(const rb_model* model, double alice_angle, double bob_angle,
                                    double source_angle, rb_distribution* out) {
    if (any_null(model, out)) return null_pointer();
    return guarded([&] {
        const retrobell::SettingsPair s(alice_angle, bob_angle);
        fill_distribution(retrobell::separable_distribution(s, source_angle, model->model), s, out);
    });
}

rb_status rb_correlation(const rb_distribution* dist, double* out) {
    if (any_null(dist, out)) return null_pointer();
    *out = retrobell::correlation(to_distribution(*dist));
    return RB_OK;
}

rb_status rb_alice_marginal(const rb_distribution* dist, double* out) {
    if (any_null(dist, out)) return null_pointer();
    *out = retrobell::alice_marginal(to_distribution(*dist));
    return RB_OK;
}

rb_status rb_bob_marginal(const rb_distribution* dist, double* out) {
    if (any_null(dist, out)) return null_pointer();
    *out = retrobell::bob_marginal(to_distribution(*dist));
    return RB_OK;
}

rb_status rb_symmetry_residuals(const rb_model* model, double alice_angle, double bob_angle,
                                double out[2]) {
    if (any_null(model, out)) return null_pointer();
    return guarded([&] {
        const auto [r0, r1] =
            retrobell::symmetry_residuals(retrobell::SettingsPair(alice_angle, bob_angle), model->model);
        out[0] = r0;
        out[1] = r1;
    });
}

rb_chsh_settings rb_chsh_default_settings(void) {
    return from_settings(retrobell::ChshSettings::tsirelson());
}

rb_status rb_chsh(const rb_model* model, const rb_chsh_settings* settings, rb_chsh_result* out) {
    if (any_null(model, settings, out)) return null_pointer();
    return guarded([&] {
        const auto r = retrobell::chsh_s(to_settings(*settings), model->model);
        out->s_value = r.s_value;
        std::copy(r.correlations.begin(), r.correlations.end(), out->correlations);
        out->settings = from_settings(r.settings);
    });
}

rb_status rb_s_closed_form(double gamma, double* out) {
    if (out == nullptr) return null_pointer();
    return guarded([&] { *out = retrobell::s_closed_form(gamma); });
}

rb_status rb_grid_search(const rb_model* model, const rb_chsh_settings* base, double half_range,
                         uint32_t steps, uint32_t workers, uint64_t max_evaluations, double* max_s,
                         rb_chsh_settings* argmax) {
    if (any_null(model, base, max_s, argmax)) return null_pointer();
    return guarded([&] {
        retrobell::GridSearchOptions opts;
        opts.workers = workers;
        if (max_evaluations != 0) {
            opts.max_evaluations = max_evaluations;
        }
        const auto r =
            retrobell::grid_search_max_s(to_settings(*base), half_range, steps, model->model, opts);
        *max_s = r.max_s;
        *argmax = from_settings(r.argmax);
    });
}

rb_status rb_gamma_sweep(const double* gammas, size_t n_gammas, const rb_chsh_settings* settings,
                         rb_sweep_row* rows) {
    if (n_gammas > 0 && any_null(gammas, rows)) return null_pointer();
    return guarded([&] {
        const auto s = settings ? to_settings(*settings) : retrobell::ChshSettings::tsirelson();
        const auto result = retrobell::gamma_sweep(std::span<const double>(gammas, n_gammas), s);
        for (std::size_t i = 0; i < result.size(); ++i) {
            rows[i] = {result[i].gamma, result[i].s_numeric, result[i].s_closed,
                       result[i].deviation_from_tsirelson};
        }
    });
}

rb_status rb_signaling_audit(const rb_model* model, double alice_angle, const double* bob_grid,
                             size_t n_grid, rb_audit_result* out) {
    if (any_null(model, bob_grid, out)) return null_pointer();
    return guarded([&] {
        const auto r = retrobell::signaling_audit(
            alice_angle, std::span<const double>(bob_grid, n_grid), model->model);
        *out = {r.max_deviation, r.worst_bob_angle};
    });
}

rb_status rb_separable_signaling_audit(const rb_model* model, double alice_angle,
                                       const double* bob_grid, size_t n_grid, double source_angle,
                                       rb_audit_result* out) {
    if (any_null(model, bob_grid, out)) return null_pointer();
    return guarded([&] {
        const auto r = retrobell::separable_signaling_audit(
            alice_angle, std::span<const double>(bob_grid, n_grid), source_angle, model->model);
        *out = {r.max_deviation, r.worst_bob_angle};
    });
}

rb_status rb_sampler_create(const rb_model* model, double alice_angle, double bob_angle,
                            uint64_t seed, rb_sampler** out) {
    if (any_null(model, out)) return null_pointer();
    *out = nullptr;
    return guarded([&] {
        *out = new rb_sampler{
            retrobell::HistorySampler(retrobell::SettingsPair(alice_angle, bob_angle), model->model),
            retrobell::RandomStream(seed, 0)};
    });
}

rb_status rb_sampler_next(rb_sampler* sampler, rb_history* out) {
    if (any_null(sampler, out)) return null_pointer();
    return guarded([&] {
        const auto h = sampler->sampler.draw(sampler->rng);
        *out = {h.lambda, h.alpha, h.beta, h.winding, static_cast<rb_outcome>(h.outcome)};
    });
}

void rb_sampler_destroy(rb_sampler* sampler) { delete sampler; }

rb_status rb_estimate_distribution(const rb_model* model, double alice_angle, double bob_angle,
                                   uint64_t n_samples, uint64_t seed, uint32_t workers,
                                   rb_empirical* out) {
    if (any_null(model, out)) return null_pointer();
    return guarded([&] {
        const auto e = retrobell::estimate_distribution(
            retrobell::SettingsPair(alice_angle, bob_angle), model->model, n_samples, seed, workers);
        std::copy(e.counts.begin(), e.counts.end(), out->counts);
        out->n_samples = e.n_samples;
        std::copy(e.frequencies.begin(), e.frequencies.end(), out->frequencies);
        std::copy(e.std_errors.begin(), e.std_errors.end(), out->std_errors);
        out->seed = e.seed;
    });
}

rb_status rb_anomaly_concentration(const rb_model* model, double alice_angle, double bob_angle,
                                   uint64_t n_samples, uint64_t seed, double k, uint32_t workers,
                                   double* fraction) {
    if (any_null(model, fraction)) return null_pointer();
    return guarded([&] {
        *fraction = retrobell::anomaly_concentration(retrobell::SettingsPair(alice_angle, bob_angle),
                                                     model->model, n_samples, seed, k, workers);
    });
}

}  // extern "C"
