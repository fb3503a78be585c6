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

#include "retrobell/weight.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "retrobell/angles.hpp"

namespace retrobell {

WeightModel::WeightModel(double gamma, double epsilon) : gamma_(gamma), epsilon_(epsilon) {
    if (!std::isfinite(gamma) || !(gamma > 0.0)) {
        throw std::invalid_argument("gamma must be a finite positive number, got " +
                                    std::to_string(gamma));
    }
    if (!std::isfinite(epsilon)) {
        throw std::invalid_argument("epsilon must be finite");
    }
}

double anomaly_weight(double alpha, const WeightModel& model) {
    const double d = alpha - model.epsilon();
    const double g = model.gamma();
    return 1.0 / (d * d + g * g);
}

double history_weight(double alpha, double beta, const WeightModel& model) {
    return anomaly_weight(alpha, model) * anomaly_weight(beta, model);
}

double net_rotation_weight(double delta, const WeightModel& model) {
    const double d = delta - 2.0 * model.epsilon();
    const double w = 2.0 * model.gamma();
    return 1.0 / (d * d + w * w);
}

double periodic_weight_series(double delta, double width, std::uint64_t n_max) {
    const double w2 = width * width;
    auto term = [&](double n) {
        const double x = delta + kTwoPi * n;
        return 1.0 / (x * x + w2);
    };
    double sum = 0.0;
    for (std::uint64_t k = n_max; k >= 1; --k) {
        const double n = static_cast<double>(k);
        sum += term(n) + term(-n);
    }
    return sum + term(0.0);
}

namespace detail {

double periodic_weight_closed_half_turns(double phi, int half_turns, double width) {
    if (!(width > 0.0)) {
        throw std::invalid_argument("periodic weight width must be positive");
    }
    const double half = 0.5 * reduce_angle(phi);
    double s = std::sin(half);
    double c = std::cos(half);
    if (half_turns % 2 != 0) {
        std::swap(s, c);
    }
    const double t = std::tanh(0.5 * width);
    return 1.0 / (s * s + c * c * t * t);
}

void require_symmetric(const WeightModel& model, const char* what) {
    if (!model.is_symmetric()) {
        throw UnsupportedModel(std::string(what) + " requires epsilon = 0");
    }
}

}  // namespace detail

double periodic_weight_closed(double delta, double width) {
    return detail::periodic_weight_closed_half_turns(delta, 0, width);
}

PeriodicWeight evaluate_periodic_weight(double delta, double width) {
    return {reduce_angle_positive(delta), width, periodic_weight_closed(delta, width)};
}

double single_particle_outcome_ratio(double theta, const WeightModel& model) {
    detail::require_symmetric(model, "single_particle_outcome_ratio");
    const double g = model.gamma();
    return detail::periodic_weight_closed_half_turns(theta, 0, g) /
           detail::periodic_weight_closed_half_turns(theta, 1, g);
}

}  // namespace retrobell
