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

// Monte Carlo generation of complete two-particle histories.
//
// A history is drawn in three stages: the outcome pair (proportional to its
// joint weight), the winding number of the net rotation (proportional to the
// Lorentzian term of that winding), and the split of the net rotation into the
// two anomalies (density proportional to W(alpha) W(net - alpha)). The initial
// orientation lambda is then fixed by Alice's boundary. Together these
// reproduce the weight W(alpha) W(beta) on whole histories.
//
// Sign convention: each anomaly is signed about its particle's own direction
// of flight, so with S1 starting at lambda and S2 at lambda + pi,
//     lambda - alpha      == Alice's outcome direction  (mod 2pi)
//     lambda + pi + beta  == Bob's outcome direction    (mod 2pi)
//     alpha + beta        == ontic_net_rotation + 2 pi winding

#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "retrobell/entangle.hpp"
#include "retrobell/weight.hpp"

namespace retrobell {

/// Per-worker pseudorandom stream. Streams for distinct (seed, worker) pairs
/// are seeded independently through std::seed_seq.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t worker = 0);

    /// Uniform on the open interval (0, 1).
    double uniform();

private:
    std::mt19937_64 engine_;
};

struct History {
    double lambda = 0.0;  // initial direction of S1, in [0, 2pi)
    double alpha = 0.0;
    double beta = 0.0;
    std::int64_t winding = 0;
    Outcome outcome = Outcome::ABbar;
};

struct EmpiricalDistribution {
    std::array<std::uint64_t, 4> counts{};
    std::uint64_t n_samples = 0;
    std::array<double, 4> frequencies{};
    std::array<double, 4> std_errors{};
    std::uint64_t seed = 0;

    static EmpiricalDistribution from_counts(const std::array<std::uint64_t, 4>& counts,
                                             std::uint64_t seed);
};

/// Walker/Vose alias table over a finite discrete distribution.
class AliasTable {
public:
    explicit AliasTable(const std::vector<double>& weights);

    std::size_t draw(RandomStream& rng) const;
    std::size_t size() const { return prob_.size(); }

private:
    std::vector<double> prob_;
    std::vector<std::size_t> alias_;
};

/// Draws n with probability proportional to 1/((delta + 2 pi n)^2 + width^2)
/// over all integers. Windings |n| <= table_half_width come from an alias
/// table; the two tails are drawn exactly by rejection, with their masses
/// taken from the Euler-Maclaurin midpoint estimate (relative error far below
/// 1e-12 of the total for the default table).
class WindingSampler {
public:
    static constexpr std::int64_t kDefaultTableHalfWidth = 512;

    WindingSampler(double delta, double width,
                   std::int64_t table_half_width = kDefaultTableHalfWidth);

    std::int64_t draw(RandomStream& rng) const;

    /// Probability mass left outside the alias table.
    double tail_probability() const { return tail_probability_; }

private:
    std::int64_t draw_tail(RandomStream& rng) const;

    double delta_;         // reduced to (-pi, pi]
    std::int64_t offset_;  // whole turns in the caller's delta beyond delta_
    double width_;
    std::int64_t half_width_;
    AliasTable table_;
    double tail_probability_;
    double positive_tail_share_;
};

/// Draws alpha with density proportional to W(alpha) W(net - alpha) (gamma
/// only, epsilon = 0) by rejection from the equal mixture of Cauchy(0, gamma)
/// and Cauchy(net, gamma). The acceptance probability is exactly 1/2.
double sample_split(double net, double gamma, RandomStream& rng);

/// Precomputes the outcome and winding tables for one set of measurement
/// angles. draw() is const and may be shared across threads, each with its own
/// RandomStream.
class HistorySampler {
public:
    HistorySampler(const SettingsPair& settings, const WeightModel& model);

    History draw(RandomStream& rng) const;

    const SettingsPair& settings() const { return settings_; }
    const WeightModel& model() const { return model_; }
    const JointDistribution& distribution() const { return dist_; }

private:
    SettingsPair settings_;
    WeightModel model_;
    JointDistribution dist_;
    std::vector<WindingSampler> windings_;  // indexed by Outcome
};

History sample_history(const SettingsPair& settings, const WeightModel& model, RandomStream& rng);

/// Aggregates n_samples histories. Worker w draws from RandomStream(seed, w);
/// results are deterministic for a fixed worker count.
EmpiricalDistribution estimate_distribution(const SettingsPair& settings, const WeightModel& model,
                                            std::uint64_t n_samples, std::uint64_t seed,
                                            unsigned workers = 1);

/// Fraction of sampled histories in which both anomalies, reduced to
/// (-pi, pi], exceed k * gamma in magnitude.
double anomaly_concentration(const SettingsPair& settings, const WeightModel& model,
                             std::uint64_t n_samples, std::uint64_t seed, double k,
                             unsigned workers = 1);

}  // namespace retrobell
