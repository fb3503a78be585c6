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

#include "retrobell/bell.hpp"

#include <cmath>
#include <string>

#include "parallel.hpp"
#include "retrobell/entangle.hpp"

namespace retrobell {

namespace {

double setting_correlation(double a, double b, const WeightModel& model) {
    return correlation(joint_distribution(SettingsPair(a, b), model));
}

}  // namespace

ChshResult chsh_s(const ChshSettings& s, const WeightModel& model) {
    ChshResult r{.s_value = 0.0, .correlations = {}, .settings = s, .model = model};
    r.correlations = {setting_correlation(s.a1, s.b1, model), setting_correlation(s.a1, s.b2, model),
                      setting_correlation(s.a2, s.b1, model), setting_correlation(s.a2, s.b2, model)};
    const auto& e = r.correlations;
    r.s_value = std::abs(e[0] + e[1] + e[2] - e[3]);
    return r;
}

double s_closed_form(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("gamma must be a finite positive number");
    }
    const double t = std::tanh(gamma);
    const double t2 = t * t;
    return 2.0 * std::numbers::sqrt2 * (1.0 - t2) / (1.0 + t2);
}

GridSearchResult grid_search_max_s(const ChshSettings& base, double half_range, std::uint32_t steps,
                                   const WeightModel& model, const GridSearchOptions& options) {
    if (steps < 1) {
        throw std::invalid_argument("grid search needs at least one step");
    }
    if (!(half_range >= 0.0) || !std::isfinite(half_range)) {
        throw std::invalid_argument("grid half-range must be finite and non-negative");
    }
    std::vector<double> offsets;
    if (half_range == 0.0) {
        offsets.push_back(0.0);
    } else {
        offsets.reserve(steps + 1);
        for (std::uint32_t i = 0; i <= steps; ++i) {
            const double num = 2.0 * static_cast<double>(i) - static_cast<double>(steps);
            offsets.push_back(half_range * num / static_cast<double>(steps));
        }
    }
    const std::uint64_t per_axis = offsets.size();
    const double evaluations = static_cast<double>(per_axis) * per_axis * per_axis;
    if (evaluations > static_cast<double>(options.max_evaluations)) {
        throw BudgetExceeded("grid of " + std::to_string(per_axis) + "^3 points exceeds the budget of " +
                             std::to_string(options.max_evaluations) + " evaluations");
    }

    struct Best {
        double s = -1.0;
        ChshSettings settings;
    };
    std::vector<Best> best(options.workers);
    detail::run_workers(per_axis, options.workers, [&](unsigned w, detail::Chunk chunk) {
        Best local;
        ChshSettings trial = base;
        for (std::uint64_t i = chunk.begin; i < chunk.end; ++i) {
            trial.a2 = base.a2 + offsets[i];
            for (double db1 : offsets) {
                trial.b1 = base.b1 + db1;
                for (double db2 : offsets) {
                    trial.b2 = base.b2 + db2;
                    const double s = chsh_s(trial, model).s_value;
                    if (s > local.s) {
                        local = {s, trial};
                    }
                }
            }
        }
        best[w] = local;
    });

    GridSearchResult result{.max_s = -1.0, .argmax = base,
                            .evaluations = per_axis * per_axis * per_axis};
    for (const auto& b : best) {
        if (b.s > result.max_s) {
            result.max_s = b.s;
            result.argmax = b.settings;
        }
    }
    return result;
}

std::vector<SweepRow> gamma_sweep(std::span<const double> gammas, const ChshSettings& settings) {
    std::vector<SweepRow> rows;
    rows.reserve(gammas.size());
    for (double g : gammas) {
        const WeightModel model(g);
        const double s = chsh_s(settings, model).s_value;
        rows.push_back({g, s, s_closed_form(g), 2.0 * std::numbers::sqrt2 - s});
    }
    return rows;
}

AuditResult signaling_audit(double alice_angle, std::span<const double> bob_grid,
                            const WeightModel& model) {
    if (bob_grid.empty()) {
        throw std::invalid_argument("signaling audit needs a non-empty Bob grid");
    }
    AuditResult r{.max_deviation = -1.0, .worst_bob_angle = bob_grid.front()};
    for (double b : bob_grid) {
        const double dev =
            std::abs(alice_marginal(joint_distribution(SettingsPair(alice_angle, b), model)) - 0.5);
        if (dev > r.max_deviation) {
            r = {dev, b};
        }
    }
    return r;
}

AuditResult separable_signaling_audit(double alice_angle, std::span<const double> bob_grid,
                                      double source_angle, const WeightModel& model) {
    if (bob_grid.empty()) {
        throw std::invalid_argument("signaling audit needs a non-empty Bob grid");
    }
    auto marginal = [&](double b) {
        return alice_marginal(separable_distribution(SettingsPair(alice_angle, b), source_angle, model));
    };
    const double reference = marginal(bob_grid.front());
    AuditResult r{.max_deviation = -1.0, .worst_bob_angle = bob_grid.front()};
    for (double b : bob_grid) {
        const double dev = std::abs(marginal(b) - reference);
        if (dev > r.max_deviation) {
            r = {dev, b};
        }
    }
    return r;
}

std::vector<double> uniform_angle_grid(std::size_t n) {
    std::vector<double> grid;
    grid.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        grid.push_back(kTwoPi * static_cast<double>(i) / static_cast<double>(n));
    }
    return grid;
}

}  // namespace retrobell
