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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "retrobell/angles.hpp"

using namespace retrobell;

namespace {


double tanh2(double x) {
    const double t = std::tanh(x);
    return t * t;
}

double sq(double x) { return x * x; }

// Random (alice, bob, gamma) triples for property checks.
struct Case {
    double alice;
    double bob;
    double gamma;
};

std::vector<Case> random_cases(std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(-2 * kPi, 2 * kPi);
    std::uniform_real_distribution<double> log_gamma(-6.0, 0.3);
    std::vector<Case> cases;
    for (int i = 0; i < n; ++i) {
        cases.push_back({angle(rng), angle(rng), std::pow(10.0, log_gamma(rng))});
    }
    return cases;
}

}  // namespace

TEST(Outcome, ComplementIsInvolution) {
    for (Outcome o : kOutcomes) {
        EXPECT_EQ(complement(complement(o)), o);
        EXPECT_NE(complement(o), o);
        EXPECT_NE(alice_aligned(complement(o)), alice_aligned(o));
        EXPECT_NE(bob_aligned(complement(o)), bob_aligned(o));
    }
    EXPECT_EQ(complement(Outcome::AB), Outcome::AbarBbar);
    EXPECT_EQ(complement(Outcome::ABbar), Outcome::AbarB);
}

TEST(SettingsPair, ThetaIsReducedDifference) {
    EXPECT_NEAR(SettingsPair(0.0, 1.0).theta(), 1.0, 0.0);
    EXPECT_NEAR(SettingsPair(3.0, -3.0).theta(), -6.0 + kTwoPi, 1e-15);
    EXPECT_EQ(SettingsPair(0.0, -kPi).theta(), kPi);
    EXPECT_THROW(SettingsPair(std::numeric_limits<double>::quiet_NaN(), 0.0), std::invalid_argument);
}

TEST(RequiredNetRotation, Examples) {
    EXPECT_EQ(required_net_rotation(Outcome::ABbar, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(required_net_rotation(Outcome::AB, 0.0), -kPi);
    EXPECT_DOUBLE_EQ(required_net_rotation(Outcome::AbarB, kPi / 4), -kPi / 4);
    EXPECT_DOUBLE_EQ(required_net_rotation(Outcome::AbarBbar, 0.3), 0.3 + kPi);
}

TEST(OnticNetRotation, MatchesBoundaryGeometry) {
    // b_out - a_out - pi, reduced, for every outcome.
    for (double theta : {-2.0, -0.4, 0.0, 0.9, 3.0}) {
        for (Outcome o : kOutcomes) {
            const double a_out = alice_aligned(o) ? 0.0 : kPi;
            const double b_out = theta + (bob_aligned(o) ? 0.0 : kPi);
            EXPECT_NEAR(reduce_angle(ontic_net_rotation(o, theta) - (b_out - a_out - kPi)), 0.0, 1e-14);
        }
        EXPECT_EQ(ontic_net_rotation(Outcome::AbarB, theta), theta);
    }
}

TEST(JointWeight, Examples) {
    const double g = 0.1;
    const WeightModel m(g);
    EXPECT_NEAR(joint_weight(Outcome::ABbar, 0.0, m) * tanh2(g), 1.0, 1e-13);
    EXPECT_DOUBLE_EQ(joint_weight(Outcome::AB, 0.0, m), 1.0);
    const double expected = 1.0 / (sq(std::sin(kPi / 6)) + sq(std::cos(kPi / 6)) * tanh2(0.1));
    EXPECT_NEAR(joint_weight(Outcome::ABbar, kPi / 3, m) / expected, 1.0, 1e-14);
    // Correlated outcomes: 1/(cos^2(theta/2) + sin^2(theta/2) tanh^2 gamma).
    const double correlated = 1.0 / (sq(std::cos(kPi / 6)) + sq(std::sin(kPi / 6)) * tanh2(0.1));
    EXPECT_NEAR(joint_weight(Outcome::AB, kPi / 3, m) / correlated, 1.0, 1e-14);
}

TEST(JointWeight, ShiftedModelUsesRequiredRotationMinusTwoEpsilon) {
    const WeightModel m(0.1, 0.3);
    for (Outcome o : kOutcomes) {
        const double expected = periodic_weight_closed(required_net_rotation(o, 0.7) - 0.6, 0.2);
        EXPECT_NEAR(joint_weight(o, 0.7, m) / expected, 1.0, 1e-13);
    }
}

TEST(JointDistribution, Examples) {
    {
        const auto d = joint_distribution(SettingsPair(0.0, 0.0), WeightModel(1e-6));
        EXPECT_NEAR(d[Outcome::AB], 0.0, 1e-6);
        EXPECT_NEAR(d[Outcome::ABbar], 0.5, 1e-6);
        EXPECT_NEAR(d[Outcome::AbarB], 0.5, 1e-6);
        EXPECT_NEAR(d[Outcome::AbarBbar], 0.0, 1e-6);
    }
    for (double g : {1e-3, 0.1, 1.0, 3.0}) {
        const auto d = joint_distribution(SettingsPair(0.2, 0.2 + kPi / 2), WeightModel(g));
        for (Outcome o : kOutcomes) {
            EXPECT_NEAR(d[o], 0.25, 1e-15);
        }
    }
    {
        const auto d = joint_distribution(SettingsPair(0.0, 0.0), WeightModel(0.1));
        EXPECT_NEAR(d[Outcome::AB], tanh2(0.1) / (2 + 2 * tanh2(0.1)), 1e-15);
    }
}

TEST(JointDistribution, MatchesNormalizedClosedForms) {
    for (const auto& c : random_cases(21, 500)) {
        const auto d = joint_distribution(SettingsPair(c.alice, c.bob), WeightModel(c.gamma));
        const double h = 0.5 * (c.bob - c.alice);
        const double t2 = tanh2(c.gamma);
        const double anti = (sq(std::cos(h)) + sq(std::sin(h)) * t2) / (2 + 2 * t2);
        const double same = (sq(std::sin(h)) + sq(std::cos(h)) * t2) / (2 + 2 * t2);
        EXPECT_NEAR(d[Outcome::ABbar], anti, 1e-13);
        EXPECT_NEAR(d[Outcome::AbarB], anti, 1e-13);
        EXPECT_NEAR(d[Outcome::AB], same, 1e-13);
        EXPECT_NEAR(d[Outcome::AbarBbar], same, 1e-13);
    }
}

TEST(JointDistribution, InvariantsOnRandomInputs) {
    for (const auto& c : random_cases(5, 2000)) {
        const WeightModel m(c.gamma);
        const auto d = joint_distribution(SettingsPair(c.alice, c.bob), m);
        double sum = 0.0;
        for (double p : d.p) {
            EXPECT_GE(p, 0.0);
            EXPECT_LE(p, 1.0);
            sum += p;
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
        // Complement symmetry holds exactly.
        EXPECT_EQ(d[Outcome::AB], d[Outcome::AbarBbar]);
        EXPECT_EQ(d[Outcome::ABbar], d[Outcome::AbarB]);
        // Reflection theta -> -theta.
        const auto r = joint_distribution(SettingsPair(c.bob, c.alice), m);
        if (std::abs(std::abs(d.theta) - kPi) > 1e-12) {
            for (Outcome o : kOutcomes) {
                EXPECT_EQ(d[o], r[o]);
            }
        }
        EXPECT_NEAR(alice_marginal(d), 0.5, 1e-12);
        EXPECT_NEAR(bob_marginal(d), 0.5, 1e-12);
        const auto [r0, r1] = symmetry_residuals(SettingsPair(c.alice, c.bob), m);
        EXPECT_EQ(r0, 0.0);
        EXPECT_EQ(r1, 0.0);
    }
}

TEST(JointDistribution, ThetaEqualsPiNeedsNoSpecialCase) {
    const auto d = joint_distribution(SettingsPair(0.0, kPi), WeightModel(0.2));
    const double t2 = tanh2(0.2);
    EXPECT_NEAR(d[Outcome::AB], 1.0 / (2 + 2 * t2), 1e-15);
    EXPECT_NEAR(d[Outcome::ABbar], t2 / (2 + 2 * t2), 1e-15);
}

TEST(JointDistribution, NormalizedEvenForShiftedModel) {
    for (const auto& c : random_cases(8, 500)) {
        const auto d = joint_distribution(SettingsPair(c.alice, c.bob), WeightModel(c.gamma, 0.37));
        EXPECT_NEAR(d.p[0] + d.p[1] + d.p[2] + d.p[3], 1.0, 1e-12);
    }
}

TEST(JointDistribution, BornLimit) {
    const WeightModel m(1e-6);
    for (int k = 0; k <= 12; ++k) {
        const double theta = k * kPi / 12;
        const auto d = joint_distribution(SettingsPair(0.0, theta), m);
        EXPECT_NEAR(d[Outcome::ABbar] + d[Outcome::AbarB], sq(std::cos(theta / 2)), 1e-6) << "k=" << k;
    }
}

TEST(JointDistribution, MatchesBruteForceHistorySums) {
    // Quadrature over the anomaly split and explicit winding sums of
    // W(alpha) W(beta), normalized over the four outcomes.
    for (double theta : {kPi / 7, kPi / 3}) {
        for (double g : {0.05, 0.3}) {
            std::array<double, 4> j{};
            double z = 0.0;
            for (Outcome o : kOutcomes) {
                j[index_of(o)] = oracle::brute_joint_weight(required_net_rotation(o, theta), g, 60);
                z += j[index_of(o)];
            }
            const auto d = joint_distribution(SettingsPair(0.0, theta), WeightModel(g));
            for (Outcome o : kOutcomes) {
                EXPECT_NEAR(d[o] / (j[index_of(o)] / z), 1.0, 1e-4)
                    << "theta=" << theta << " gamma=" << g << " outcome=" << outcome_name(o);
            }
        }
    }
}

TEST(Correlation, Examples) {
    EXPECT_NEAR(correlation(joint_distribution(SettingsPair(0.0, 0.0), WeightModel(1e-8))), -1.0, 1e-12);
    for (double theta : {0.3, 1.0, 2.0, 3.0}) {
        EXPECT_NEAR(correlation(joint_distribution(SettingsPair(0.0, theta), WeightModel(1e-8))),
                    -std::cos(theta), 1e-12);
    }
    const double t2 = tanh2(0.1);
    EXPECT_NEAR(correlation(joint_distribution(SettingsPair(0.0, kPi / 3), WeightModel(0.1))),
                -std::cos(kPi / 3) * (1 - t2) / (1 + t2), 1e-14);
}

TEST(Correlation, IsCosineTimesSech) {
    for (const auto& c : random_cases(13, 500)) {
        const double e = correlation(joint_distribution(SettingsPair(c.alice, c.bob), WeightModel(c.gamma)));
        EXPECT_NEAR(e, -std::cos(c.bob - c.alice) / std::cosh(2 * c.gamma), 1e-13);
        EXPECT_LE(std::abs(e), 1.0);
    }
}

TEST(AliceMarginal, ShiftedModelAtQuarterTurn) {
    // theta = pi/2, gamma = 0.3, epsilon = 0.4. The closed-form weights give
    // J_AB = J_AbarBbar = J_AbarB = C(-pi/2 - 0.8), J_ABbar = C(pi/2 - 0.8),
    // with C(d) = 1/(sin^2(d/2) + cos^2(d/2) tanh^2(0.3)).
    auto c = [](double d) { return 1.0 / (sq(std::sin(d / 2)) + sq(std::cos(d / 2)) * tanh2(0.3)); };
    const double x = c(-kPi / 2 - 0.8);
    const double y = c(kPi / 2 - 0.8);
    const double expected = (x + y) / (3 * x + y);
    const double pa = alice_marginal(joint_distribution(SettingsPair(0.0, kPi / 2), WeightModel(0.3, 0.4)));
    EXPECT_NEAR(pa, expected, 1e-14);
    EXPECT_NEAR(pa, 0.71691074635224, 1e-13);
    EXPECT_GT(std::abs(pa - 0.5), 0.1);
}

TEST(AliceMarginal, ShiftedModelSignals) {
    const double pa = alice_marginal(joint_distribution(SettingsPair(0.0, kPi / 4), WeightModel(0.1, 0.3)));
    EXPECT_GT(std::abs(pa - 0.5), 1e-3);
}

TEST(SymmetryResiduals, ShiftedModel) {
    const auto [r0, r1] = symmetry_residuals(SettingsPair(0.0, kPi / 4), WeightModel(0.1, 0.3));
    EXPECT_EQ(r0, 0.0);  // theta - pi and theta + pi differ by a full turn
    EXPECT_GT(r1, 0.0);
    for (double eps : {-1.0, 0.05, 0.3, 2.0}) {
        const auto [s0, s1] = symmetry_residuals(SettingsPair(0.0, 0.0), WeightModel(0.2, eps));
        EXPECT_LE(s0, 1e-12 * joint_weight(Outcome::AB, 0.0, WeightModel(0.2, eps)));
        (void)s1;
    }
}

TEST(SeparableDistribution, Examples) {
    {
        const auto d = separable_distribution(SettingsPair(0.4, 0.4), 0.4, WeightModel(1e-6));
        EXPECT_NEAR(d[Outcome::AB], 1.0, 1e-6);
        EXPECT_NEAR(d[Outcome::ABbar], 0.0, 1e-6);
        EXPECT_NEAR(d[Outcome::AbarB], 0.0, 1e-6);
        EXPECT_NEAR(d[Outcome::AbarBbar], 0.0, 1e-6);
    }
    {
        const auto d = separable_distribution(SettingsPair(kPi / 3, 1.0), 0.0, WeightModel(1e-6));
        EXPECT_NEAR(alice_marginal(d), sq(std::cos(kPi / 6)), 1e-6);
    }
}

TEST(SeparableDistribution, AliceMarginalIgnoresBob) {
    const WeightModel m(0.2);
    const double reference = alice_marginal(separable_distribution(SettingsPair(0.3, 0.0), -0.5, m));
    for (int i = 0; i < 360; ++i) {
        const double b = kTwoPi * i / 360;
        EXPECT_NEAR(alice_marginal(separable_distribution(SettingsPair(0.3, b), -0.5, m)), reference, 1e-12);
    }
}

TEST(SeparableDistribution, FactorizesIntoMarginals) {
    for (const auto& c : random_cases(17, 500)) {
        const auto d = separable_distribution(SettingsPair(c.alice, c.bob), 0.7, WeightModel(c.gamma));
        const double pa = alice_marginal(d);
        const double pb = bob_marginal(d);
        EXPECT_NEAR(d[Outcome::AB], pa * pb, 1e-12);
        EXPECT_NEAR(d[Outcome::ABbar], pa * (1 - pb), 1e-12);
        EXPECT_NEAR(d[Outcome::AbarB], (1 - pa) * pb, 1e-12);
        EXPECT_NEAR(d[Outcome::AbarBbar], (1 - pa) * (1 - pb), 1e-12);
        EXPECT_NEAR(d.p[0] + d.p[1] + d.p[2] + d.p[3], 1.0, 1e-12);
    }
}

TEST(SeparableDistribution, OneParticleFactorsFollowSingleParticleRatio) {
    const WeightModel m(0.25);
    const auto d = separable_distribution(SettingsPair(1.1, 0.0), 0.2, m);
    const double ratio = single_particle_outcome_ratio(1.1 - 0.2, m);
    EXPECT_NEAR(alice_marginal(d), ratio / (1 + ratio), 1e-14);
}

TEST(SeparableDistribution, RequiresSymmetricModel) {
    EXPECT_THROW(separable_distribution(SettingsPair(0, 0), 0, WeightModel(0.1, 0.1)), UnsupportedModel);
}
