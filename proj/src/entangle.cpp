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

#include "retrobell/entangle.hpp"

#include <cmath>
#include <stdexcept>

#include "retrobell/angles.hpp"

namespace retrobell {

std::string_view outcome_name(Outcome o) {
    switch (o) {
        case Outcome::AB: return "ab";
        case Outcome::ABbar: return "a_bbar";
        case Outcome::AbarB: return "abar_b";
        case Outcome::AbarBbar: return "abar_bbar";
    }
    return "?";
}

SettingsPair::SettingsPair(double alice_angle, double bob_angle)
    : alice_(alice_angle), bob_(bob_angle), theta_(reduce_angle(bob_angle - alice_angle)) {
    if (!std::isfinite(alice_angle) || !std::isfinite(bob_angle)) {
        throw std::invalid_argument("measurement angles must be finite");
    }
}

namespace {

// A required rotation written as phi + half_turns * pi. Only the parity of
// half_turns matters to the closed form.
struct HalfTurnRotation {
    double phi;
    int half_turns;
};

HalfTurnRotation required_rotation_parts(Outcome pair, double theta) {
    switch (pair) {
        case Outcome::ABbar: return {theta, 0};
        case Outcome::AbarB: return {-theta, 0};
        case Outcome::AB: return {theta, -1};
        case Outcome::AbarBbar: return {theta, 1};
    }
    return {theta, 0};
}

}  // namespace

double required_net_rotation(Outcome pair, double theta) {
    const auto r = required_rotation_parts(pair, theta);
    return r.phi + r.half_turns * kPi;
}

double ontic_net_rotation(Outcome pair, double theta) {
    if (pair == Outcome::AbarB) {
        return theta;
    }
    return required_net_rotation(pair, theta);
}

double joint_weight(Outcome pair, double theta, const WeightModel& model) {
    const auto r = required_rotation_parts(pair, theta);
    return detail::periodic_weight_closed_half_turns(r.phi - 2.0 * model.epsilon(), r.half_turns,
                                                     2.0 * model.gamma());
}

JointDistribution joint_distribution(const SettingsPair& settings, const WeightModel& model) {
    const double theta = settings.theta();
    std::array<double, 4> j{};
    for (Outcome o : kOutcomes) {
        j[index_of(o)] = joint_weight(o, theta, model);
    }
    const double z = (j[0] + j[3]) + (j[1] + j[2]);
    JointDistribution dist{.p = {}, .theta = theta, .model = model};
    for (std::size_t i = 0; i < 4; ++i) {
        dist.p[i] = j[i] / z;
    }
    return dist;
}

double correlation(const JointDistribution& d) {
    return (d[Outcome::AB] + d[Outcome::AbarBbar]) - (d[Outcome::AbarB] + d[Outcome::ABbar]);
}

double alice_marginal(const JointDistribution& d) { return d[Outcome::AB] + d[Outcome::ABbar]; }

double bob_marginal(const JointDistribution& d) { return d[Outcome::AB] + d[Outcome::AbarB]; }

std::pair<double, double> symmetry_residuals(const SettingsPair& settings, const WeightModel& model) {
    const double theta = settings.theta();
    return {std::abs(joint_weight(Outcome::AB, theta, model) -
                     joint_weight(Outcome::AbarBbar, theta, model)),
            std::abs(joint_weight(Outcome::AbarB, theta, model) -
                     joint_weight(Outcome::ABbar, theta, model))};
}

namespace {

// Probability that a particle prepared along `source` is found aligned with a
// setting at `setting`: one-particle outcome weights normalized to each other.
std::pair<double, double> one_particle_probabilities(double setting, double source, double gamma) {
    const double aligned = detail::periodic_weight_closed_half_turns(setting - source, 0, gamma);
    const double anti = detail::periodic_weight_closed_half_turns(setting - source, 1, gamma);
    const double z = aligned + anti;
    return {aligned / z, anti / z};
}

}  // namespace

JointDistribution separable_distribution(const SettingsPair& settings, double source_angle,
                                         const WeightModel& model) {
    detail::require_symmetric(model, "separable_distribution");
    if (!std::isfinite(source_angle)) {
        throw std::invalid_argument("source angle must be finite");
    }
    const auto [pa, qa] = one_particle_probabilities(settings.alice(), source_angle, model.gamma());
    const auto [pb, qb] = one_particle_probabilities(settings.bob(), source_angle, model.gamma());
    JointDistribution dist{.p = {}, .theta = settings.theta(), .model = model};
    dist.p[index_of(Outcome::AB)] = pa * pb;
    dist.p[index_of(Outcome::ABbar)] = pa * qb;
    dist.p[index_of(Outcome::AbarB)] = qa * pb;
    dist.p[index_of(Outcome::AbarBbar)] = qa * qb;
    return dist;
}

}  // namespace retrobell
