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

// Lorentzian anomaly weights for Schulman-style spin histories.
//
// A spin-vector that must rotate anomalously through an angle alpha between
// two boundary conditions carries the unnormalized history weight
//
//     W(alpha) = 1 / ((alpha - epsilon)^2 + gamma^2)
//
// with epsilon = 0 for the symmetric model. Outcomes only fix rotations
// modulo 2pi, so outcome weights are sums of W over all windings; those sums
// have the closed form periodic_weight_closed(). All overall constants that
// cancel under normalization are dropped, so compare ratios, not absolute
// values, when checking against series or quadrature.

#pragma once

#include <cstdint>
#include <stdexcept>

namespace retrobell {

/// Thrown by operations defined only for the symmetric model (epsilon = 0).
class UnsupportedModel : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class WeightModel {
public:
    /// Throws std::invalid_argument unless gamma > 0 and both are finite.
    explicit WeightModel(double gamma, double epsilon = 0.0);

    double gamma() const { return gamma_; }
    double epsilon() const { return epsilon_; }
    bool is_symmetric() const { return epsilon_ == 0.0; }

    friend bool operator==(const WeightModel&, const WeightModel&) = default;

private:
    double gamma_;
    double epsilon_;
};

/// A winding-summed weight at a given net rotation.
struct PeriodicWeight {
    double delta;  // reduced to [0, 2pi)
    double width;
    double value;
};

double anomaly_weight(double alpha, const WeightModel& model);

/// Unnormalized weight of a two-particle history with anomalies alpha, beta.
double history_weight(double alpha, double beta, const WeightModel& model);

/// Convolution of two anomaly weights at fixed net rotation: a Lorentzian of
/// width 2*gamma, peak-normalized to 1/(2*gamma)^2, centred at 2*epsilon.
double net_rotation_weight(double delta, const WeightModel& model);

/// Truncated winding sum  sum_{n=-n_max}^{n_max} 1/((delta + 2 n pi)^2 + width^2).
///
/// The discarded tail is bounded by about 1/(2 pi^2 n_max), so n_max = 1e5
/// leaves an absolute error near 5e-7. Terms are added smallest-first.
double periodic_weight_series(double delta, double width, std::uint64_t n_max);

/// Closed form of the infinite winding sum, up to a width-dependent constant:
///     1 / (sin^2(delta/2) + cos^2(delta/2) tanh^2(width/2)).
/// Throws std::invalid_argument if width <= 0.
double periodic_weight_closed(double delta, double width);

PeriodicWeight evaluate_periodic_weight(double delta, double width);

/// Ratio P(theta)/P(pi + theta) of the two outcomes of a single spin measured
/// at relative angle theta to its preparation. Requires a symmetric model.
double single_particle_outcome_ratio(double theta, const WeightModel& model);

namespace detail {

/// periodic_weight_closed(phi + half_turns * pi, width), evaluated so that
/// half-turn shifts swap sin^2 and cos^2 exactly instead of through rounding.
double periodic_weight_closed_half_turns(double phi, int half_turns, double width);

void require_symmetric(const WeightModel& model, const char* what);

}  // namespace detail

}  // namespace retrobell
