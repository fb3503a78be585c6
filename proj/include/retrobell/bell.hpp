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

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "retrobell/angles.hpp"
#include "retrobell/weight.hpp"

namespace retrobell {

struct ChshSettings {
    double a1 = 0.0;
    double a2 = kPi / 2.0;
    double b1 = kPi / 4.0;
    double b2 = -kPi / 4.0;

    /// The standard quantum-optimal angles (0, pi/2, pi/4, -pi/4).
    static ChshSettings tsirelson() { return {}; }
};

struct ChshResult {
    double s_value = 0.0;
    /// E(a1,b1), E(a1,b2), E(a2,b1), E(a2,b2).
    std::array<double, 4> correlations{};
    ChshSettings settings;
    WeightModel model{1.0};
};

/// S = |E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2)| for the entangled model.
ChshResult chsh_s(const ChshSettings& settings, const WeightModel& model);

/// 2 sqrt(2) (1 - tanh^2 gamma) / (1 + tanh^2 gamma), i.e. 2 sqrt(2) sech(2 gamma).
double s_closed_form(double gamma);

class BudgetExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

struct GridSearchOptions {
    unsigned workers = 1;
    /// Upper bound on the number of chsh_s evaluations, (steps + 1)^3.
    std::uint64_t max_evaluations = 2'000'000'000ULL;
};

struct GridSearchResult {
    double max_s = 0.0;
    ChshSettings argmax;
    std::uint64_t evaluations = 0;
};

/// Exhaustive scan around `base` with a1 held fixed. a2, b1 and b2 each take
/// steps + 1 equally spaced offsets spanning [-half_range, +half_range]; a
/// zero half_range collapses every axis to the centre. The first maximum in
/// lexicographic (a2, b1, b2) order wins, whatever the worker count.
GridSearchResult grid_search_max_s(const ChshSettings& base, double half_range, std::uint32_t steps,
                                   const WeightModel& model, const GridSearchOptions& options = {});

struct SweepRow {
    double gamma;
    double s_numeric;
    double s_closed;
    double deviation_from_tsirelson;
};

std::vector<SweepRow> gamma_sweep(std::span<const double> gammas,
                                  const ChshSettings& settings = ChshSettings::tsirelson());

struct AuditResult {
    double max_deviation = 0.0;
    double worst_bob_angle = 0.0;
};

/// Largest |P_A - 1/2| as Bob's setting scans bob_grid with Alice fixed.
AuditResult signaling_audit(double alice_angle, std::span<const double> bob_grid,
                            const WeightModel& model);

/// The same audit on the separable (product) preparation along source_angle;
/// the reference marginal is P_A at the first grid point.
AuditResult separable_signaling_audit(double alice_angle, std::span<const double> bob_grid,
                                      double source_angle, const WeightModel& model);

/// n equally spaced angles on [0, 2pi).
std::vector<double> uniform_angle_grid(std::size_t n);

}  // namespace retrobell
