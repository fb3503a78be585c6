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

// Acceptance suite. Everything goes through the public C API.
// Prints one PASS/FAIL line per criterion, exits nonzero if any fails.

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "retrobell/retrobell.h"

namespace {

constexpr double kPi = std::numbers::pi;

void ok(rb_status s) {
    if (s != RB_OK) throw std::runtime_error(std::string(rb_status_string(s)) + ": " + rb_last_error());
}

struct ModelDeleter {
    void operator()(rb_model* m) const { rb_model_destroy(m); }
};
using Model = std::unique_ptr<rb_model, ModelDeleter>;

Model model(double gamma, double epsilon = 0.0) {
    rb_model* raw = nullptr;
    ok(rb_model_create(gamma, epsilon, &raw));
    return Model(raw);
}

std::vector<double> bob_grid(std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = -kPi + 2 * kPi * static_cast<double>(i) / static_cast<double>(n);
    return g;
}

struct Outcome {
    bool pass;
    std::string detail;
};

Outcome born_rule() {
    auto m = model(1e-6);
    double worst = 0;
    for (int k = 0; k <= 12; ++k) {
        const double theta = k * kPi / 12;
        rb_distribution d;
        ok(rb_joint_distribution(m.get(), 0.0, theta, &d));
        const double c = std::cos(theta / 2);
        worst = std::max(worst, std::abs(d.p[RB_A_BBAR] + d.p[RB_ABAR_B] - c * c));
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "max |P(A!=B) - cos^2(theta/2)| = %.3e", worst);
    return {worst <= 1e-6, buf};
}

Outcome no_signaling() {
    double worst = 0;
    const double gammas[8] = {1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.3, 0.6, 1.0};
    for (double g : gammas) {
        auto m = model(g);
        for (int i = 0; i < 25; ++i) {
            const double theta = -kPi + 2 * kPi * i / 24.0;
            const double alice = 0.37;
            rb_distribution d;
            ok(rb_joint_distribution(m.get(), alice, alice + theta, &d));
            double pa = 0, pb = 0;
            ok(rb_alice_marginal(&d, &pa));
            ok(rb_bob_marginal(&d, &pb));
            worst = std::max({worst, std::abs(pa - 0.5), std::abs(pb - 0.5)});
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "max marginal deviation = %.3e", worst);
    return {worst <= 1e-12, buf};
}

Outcome tsirelson() {
    const rb_chsh_settings s = rb_chsh_default_settings();
    double worst = 0;
    for (double g : {1e-4, 1e-2, 0.1, 0.5, 1.0}) {
        auto m = model(g);
        rb_chsh_result r;
        double closed = 0;
        ok(rb_chsh(m.get(), &s, &r));
        ok(rb_s_closed_form(g, &closed));
        worst = std::max(worst, std::abs(r.s_value - closed));
    }
    auto tiny = model(1e-8);
    rb_chsh_result r;
    ok(rb_chsh(tiny.get(), &s, &r));
    const double gap = std::abs(r.s_value - 2 * std::numbers::sqrt2);
    char buf[128];
    std::snprintf(buf, sizeof buf, "max |S - closed form| = %.3e, |S(1e-8) - 2sqrt2| = %.3e", worst, gap);
    return {worst <= 1e-12 && gap <= 1e-8, buf};
}

Outcome grid_replication() {
    auto m = model(0.1);
    const rb_chsh_settings base = rb_chsh_default_settings();
    const unsigned workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    double max_s = 0, closed = 0;
    rb_chsh_settings argmax;
    const auto t0 = std::chrono::steady_clock::now();
    ok(rb_grid_search(m.get(), &base, kPi / 100, 200, workers, 0, &max_s, &argmax));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok(rb_s_closed_form(0.1, &closed));
    char buf[160];
    std::snprintf(buf, sizeof buf, "max S = %.15f, closed form = %.15f, %u workers, %.1f s", max_s, closed, workers,
                  secs);
    return {max_s <= closed + 1e-12, buf};
}

Outcome sampler_fidelity() {
    const double theta = kPi / 3, gamma = 0.05;
    auto m = model(gamma);
    rb_distribution exact;
    ok(rb_joint_distribution(m.get(), 0.0, theta, &exact));
    rb_empirical e;
    ok(rb_estimate_distribution(m.get(), 0.0, theta, 1000000, 20260915, 1, &e));
    double worst_z = 0, chi2 = 0;
    for (int i = 0; i < 4; ++i) {
        const double p = exact.p[i];
        const double se = std::sqrt(p * (1 - p) / static_cast<double>(e.n_samples));
        worst_z = std::max(worst_z, std::abs(e.frequencies[i] - p) / se);
        const double expected = p * static_cast<double>(e.n_samples);
        chi2 += (static_cast<double>(e.counts[i]) - expected) * (static_cast<double>(e.counts[i]) - expected) / expected;
    }
    const double pvalue = boost::math::cdf(boost::math::complement(boost::math::chi_squared(3), chi2));
    char buf[128];
    std::snprintf(buf, sizeof buf, "max |z| = %.3f, chi2 = %.3f, p = %.4f", worst_z, chi2, pvalue);
    return {worst_z <= 4 && pvalue > 0.001, buf};
}

// The ratio spans two decades (about 80 at delta=0.1, w=0.2), and the plain truncated
// sum carries a tail of ~1/(2 pi^2 n_max) in each term, so the mismatch is measured
// relative to the closed-form ratio. The absolute figure is printed alongside.
Outcome series_identity() {
    double worst = 0, worst_abs = 0;
    for (double w : {0.2, 1.0}) {
        double s_pi = 0, c_pi = 0;
        ok(rb_periodic_weight_series(kPi, w, 100000, &s_pi));
        ok(rb_periodic_weight_closed(kPi, w, &c_pi));
        for (double delta : {0.1, 1.0, 2.0, 3.0}) {
            double s = 0, c = 0;
            ok(rb_periodic_weight_series(delta, w, 100000, &s));
            ok(rb_periodic_weight_closed(delta, w, &c));
            const double ratio = c / c_pi;
            worst_abs = std::max(worst_abs, std::abs(s / s_pi - ratio));
            worst = std::max(worst, std::abs(s / s_pi - ratio) / ratio);
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "max relative ratio mismatch = %.3e (absolute %.3e)", worst, worst_abs);
    return {worst <= 1e-5, buf};
}

Outcome fine_tuning() {
    double worst = 0;
    for (double g : {1e-3, 0.1, 0.5, 1.0}) {
        auto m = model(g);
        for (double alice : {0.0, 0.8, -2.1}) {
            for (double bob : bob_grid(36)) {
                double r[2];
                ok(rb_symmetry_residuals(m.get(), alice, bob, r));
                worst = std::max({worst, r[0], r[1]});
            }
        }
    }
    auto shifted = model(0.1, 0.3);
    const auto grid = bob_grid(360);
    rb_audit_result a;
    ok(rb_signaling_audit(shifted.get(), 0.0, grid.data(), grid.size(), &a));
    char buf[160];
    std::snprintf(buf, sizeof buf, "max residual = %.3e, shifted audit deviation = %.16g at bob = %.16g", worst,
                  a.max_deviation, a.worst_bob_angle);
    return {worst <= 1e-12 && a.max_deviation > 1e-3, buf};
}

Outcome concentration() {
    auto m = model(1e-3);
    double f = 1.0;
    ok(rb_anomaly_concentration(m.get(), 0.0, kPi / 4, 100000, 7, 100.0, 1, &f));
    char buf[96];
    std::snprintf(buf, sizeof buf, "fraction beyond 100 gamma = %.5f", f);
    return {f <= 0.01, buf};
}

Outcome separable() {
    auto m = model(0.1);
    double lo = 1, hi = 0;
    for (double bob : bob_grid(360)) {
        rb_distribution d;
        double pa = 0;
        ok(rb_separable_distribution(m.get(), 0.4, bob, 1.1, &d));
        ok(rb_alice_marginal(&d, &pa));
        lo = std::min(lo, pa);
        hi = std::max(hi, pa);
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "Alice marginal spread = %.3e", hi - lo);
    return {hi - lo <= 1e-12, buf};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"born_rule_recovery", born_rule},
        {"exact_no_signaling", no_signaling},
        {"tsirelson_formula", tsirelson},
        {"grid_search_replication", grid_replication},
        {"sampler_fidelity", sampler_fidelity},
        {"series_closed_form_identity", series_identity},
        {"fine_tuning_demonstration", fine_tuning},
        {"anomaly_concentration", concentration},
        {"separable_no_influence", separable},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, fn] : criteria) {
        ++index;
        Outcome o{false, ""};
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", index - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
