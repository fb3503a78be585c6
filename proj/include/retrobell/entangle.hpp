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

// Two-particle model of a singlet pair: two spin-vectors prepared pointing in
// opposite (otherwise unconstrained) directions, each rotated anomalously to
// match the outcome boundary at its own detector.

#pragma once

#include <array>
#include <string_view>
#include <utility>

#include "retrobell/weight.hpp"

namespace retrobell {

/// Alice/Bob outcome pair. A (B) means the measured spin-vector is aligned
/// with Alice's (Bob's) setting, Abar (Bbar) means anti-aligned.
enum class Outcome : int { AB = 0, ABbar = 1, AbarB = 2, AbarBbar = 3 };

inline constexpr std::array<Outcome, 4> kOutcomes = {Outcome::AB, Outcome::ABbar, Outcome::AbarB,
                                                     Outcome::AbarBbar};

/// Flips both outcomes.
constexpr Outcome complement(Outcome o) { return static_cast<Outcome>(3 - static_cast<int>(o)); }
constexpr bool alice_aligned(Outcome o) { return o == Outcome::AB || o == Outcome::ABbar; }
constexpr bool bob_aligned(Outcome o) { return o == Outcome::AB || o == Outcome::AbarB; }
constexpr std::size_t index_of(Outcome o) { return static_cast<std::size_t>(o); }
std::string_view outcome_name(Outcome o);

class SettingsPair {
public:
    SettingsPair(double alice_angle, double bob_angle);

    double alice() const { return alice_; }
    double bob() const { return bob_; }
    /// bob - alice, reduced to (-pi, pi].
    double theta() const { return theta_; }

private:
    double alice_;
    double bob_;
    double theta_;
};

struct JointDistribution {
    std::array<double, 4> p{};  // indexed by Outcome
    double theta = 0.0;
    WeightModel model{1.0};

    double operator[](Outcome o) const { return p[index_of(o)]; }
};

/// Signed net rotation an outcome pair requires at relative angle theta:
/// ABbar -> theta, AbarB -> -theta, AB -> theta - pi, AbarBbar -> theta + pi.
/// Windings are left to the periodic weight.
double required_net_rotation(Outcome pair, double theta);

/// Net rotation as measured on the ontic picture (S1 starts at lambda, S2 at
/// lambda + pi, each anomaly signed about its own direction of flight):
/// b_out - a_out - pi. Differs from required_net_rotation only for AbarB,
/// where it is theta rather than -theta; both carry equal weight when
/// epsilon = 0.
double ontic_net_rotation(Outcome pair, double theta);

/// Unnormalized winding-summed weight J of an outcome pair. For epsilon != 0
/// the closed form is evaluated at required_net_rotation - 2 epsilon.
double joint_weight(Outcome pair, double theta, const WeightModel& model);

JointDistribution joint_distribution(const SettingsPair& settings, const WeightModel& model);

/// E = p(AB) + p(AbarBbar) - p(AbarB) - p(ABbar).
double correlation(const JointDistribution& dist);
double alice_marginal(const JointDistribution& dist);
double bob_marginal(const JointDistribution& dist);

/// (|J_AB - J_AbarBbar|, |J_AbarB - J_ABbar|) on the unnormalized weights.
std::pair<double, double> symmetry_residuals(const SettingsPair& settings, const WeightModel& model);

/// Product distribution for two independently prepared particles, both spin-up
/// along source_angle. Requires a symmetric model.
JointDistribution separable_distribution(const SettingsPair& settings, double source_angle,
                                         const WeightModel& model);

}  // namespace retrobell
